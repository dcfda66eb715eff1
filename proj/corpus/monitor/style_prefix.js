// The regular-expression test coerces non-strings through toString, which
// a stateful object can abuse; its argument must already be a string.
var style = function (name, value)
/*: [Widget | Global] Widget ... -> Widget */
{
    if (this === window) {
        throw "ADsafe: global this";
    }
    if (url_re.test(value)) {
        throw "ADsafe: url in style";
    }
    return this;
};
