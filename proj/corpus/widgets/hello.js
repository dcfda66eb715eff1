var greeting = "hello";
var n = 1 + 2 * 3;
var line = greeting + " widget";
line;
