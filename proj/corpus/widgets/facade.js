var bunch = dom.tag("p");
dom.append(bunch, dom.tag("b"));
ADSAFE.later(function () {
    return "later";
}, 10);
lib.log;
