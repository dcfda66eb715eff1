var x = 3;
var y = 4;
x * y - 5;
