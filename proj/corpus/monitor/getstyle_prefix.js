// The style name is unchecked, so the lookup index is any widget value;
// reading through it could reach engine internals like __proto__.
var getStyle = function (name)
/*: [Widget | Global] Widget ... -> Widget */
{
    if (this === window) {
        throw "ADsafe: global this";
    }
    var nodes = this["___nodes___"];
    if (typeof nodes === "object") {
        var sty = window.getComputedStyle(nodes[0]);
        return sty[name];
    }
    throw "ADsafe: empty bunch";
};
