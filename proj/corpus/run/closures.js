var make_adder = function (n) {
    return function (m) {
        return n + m;
    };
};
var add3 = make_adder(3);
add3(39);
