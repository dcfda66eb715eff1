// Boolean-valued whitelist: the membership test proves nothing about the
// tag name itself, so createElement still sees an arbitrary string.
var string_check = function (string)
/*: [Widget | Global] Widget -> Str */
{
    if (typeof string !== "string") {
        throw "ADsafe: string violation";
    }
    return string;
};
var makeableTagName = {"div": true, "p": true, "b": true};
var make = function (tagName)
/*: [Widget | Global] Widget ... -> Widget */
{
    tagName = string_check(tagName);
    var ok = makeableTagName[tagName];
    if (ok === true) {
        document.createElement(tagName);
    }
    return true;
};
