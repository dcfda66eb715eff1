var f = function (x)
/*: Widget -> Widget */
{
    return x;
};
