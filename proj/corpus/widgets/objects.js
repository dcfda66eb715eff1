var o = {a: 1, b: "two", c: true};
o.d = null;
o.a = o.a;
delete o.c;
var picked = o["b"];
picked;
