// The inlined global check narrows this from Widget | Global to Widget,
// so returning it satisfies the stated result type.
var append = function (child)
/*: [Widget | Global] Widget ... -> Widget */
{
    if (this === window) {
        throw "ADsafe: global this";
    }
    return this;
};
