var string_check = function (string)
/*: [Widget | Global] Widget -> Str */
{
    if (typeof string !== "string") {
        throw "ADsafe: string violation";
    }
    return string;
};
var reject_name = function (name)
/*: cheat (("arguments", "callee", "caller", "constructor", "eval", "prototype",
            "unwatch", "valueOf", "watch", "__proto__", "___nodes___", "___star___")+ -> True)
         & (("arguments", "callee", "caller", "constructor", "eval", "prototype",
            "unwatch", "valueOf", "watch", "__proto__", "___nodes___", "___star___")- -> True | False) */
{
    return typeof name !== "string" || name.charAt(0) === "_" || name.slice(-1) === "_";
};
var getStyle = function (name)
/*: [Widget | Global] Widget ... -> Widget */
{
    if (this === window) {
        throw "ADsafe: global this";
    }
    name = string_check(name);
    if (reject_name(name)) {
        throw "ADsafe: bad style name";
    }
    var nodes = this["___nodes___"];
    if (typeof nodes === "object") {
        var sty = window.getComputedStyle(nodes[0]);
        return sty[name];
    }
    throw "ADsafe: empty bunch";
};
