// The fake-Bunch attack run end to end with the gate switched off: the
// monitor's value method hands the phony appendChild a real text node,
// and the widget walks ownerDocument.defaultView up to window.
var string_check = function (string)
/*: [Widget | Global] Widget -> Str */
{
    if (typeof string !== "string") {
        throw "ADsafe: string violation";
    }
    return string;
};
var bunch_value = function (value)
/*: [Widget | Global] Widget ... -> Widget */
{
    if (this === window) {
        throw "ADsafe: global this";
    }
    value = string_check(value);
    var nodes = this["___nodes___"];
    if (typeof nodes === "object") {
        nodes[0].appendChild(document.createTextNode(value));
    }
    return this;
};
var tag = function (tagName)
/*: [Widget | Global] Widget ... -> Widget */
{
    tagName = string_check(tagName);
    return {"___nodes___": [document.createElement(tagName)], "value": bunch_value};
};

var myWindow, fakeNode, fakeBunch, realBunch;
fakeNode = {
    appendChild: function (elt) {
        myWindow = elt.ownerDocument.defaultView;
    },
    tagName: "div",
    value: null
};
fakeBunch = {"___nodes___": [fakeNode]};
realBunch = tag("p");
fakeBunch.value = realBunch.value;
fakeBunch.value("");
myWindow.alert("hacked");
