var twice = function (f, x) {
    return f(f(x));
};
var inc = function (n) {
    return n;
};
twice(inc, 5);
