var string_check = function (string)
/*: [Widget | Global] Widget -> Str */
{
    if (typeof string !== "string") {
        throw "ADsafe: string violation";
    }
    return string;
};
var style = function (name, value)
/*: [Widget | Global] Widget ... -> Widget */
{
    if (this === window) {
        throw "ADsafe: global this";
    }
    value = string_check(value);
    if (url_re.test(value)) {
        throw "ADsafe: url in style";
    }
    return this;
};
