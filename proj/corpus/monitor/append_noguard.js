var append = function (child)
/*: [Widget | Global] Widget ... -> Widget */
{
    return this;
};
