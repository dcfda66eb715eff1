// String-valued whitelist: the looked-up value is one of finitely many
// tag names, none of which is "script".
var string_check = function (string)
/*: [Widget | Global] Widget -> Str */
{
    if (typeof string !== "string") {
        throw "ADsafe: string violation";
    }
    return string;
};
var makeableTagName = {"div": "div", "p": "p", "b": "b"};
var make = function (tagName)
/*: [Widget | Global] Widget ... -> Widget */
{
    tagName = string_check(tagName);
    var tag = makeableTagName[tagName];
    if (typeof tag === "string") {
        document.createElement(tag);
    }
    return true;
};
