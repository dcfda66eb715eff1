var classify = function (x) {
    if (typeof x === "string") {
        return "a string";
    }
    if (typeof x === "number") {
        return "a number";
    }
    if (x === null) {
        return "null";
    }
    return "something else";
};
classify(42);
classify("blue");
