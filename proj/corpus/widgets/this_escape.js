// Calling f() binds this to window, handing out the global object.
var f = function () {
    return this;
};
var myWindow = f();
