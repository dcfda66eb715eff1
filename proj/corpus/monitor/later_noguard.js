// Without the typeof guard the first argument stays widget-typed, which
// includes strings, and setTimeout with a string behaves like eval.
var later = function (func, timeout)
/*: Widget * Widget -> Widget */
{
    setTimeout(func, timeout || 0);
    return undefined;
};
