// setTimeout demands a function first argument; the typeof guard narrows
// the widget-typed parameter down to one.
var later = function (func, timeout)
/*: Widget * Widget -> Widget */
{
    if (typeof func === "function") {
        setTimeout(func, timeout || 0);
    } else {
        throw "error";
    }
    return undefined;
};
