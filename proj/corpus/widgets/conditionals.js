var choice = function (flag, a, b) {
    if (flag) {
        return a;
    }
    return b;
};
var r = choice(true, "x", "y") || "fallback";
r;
