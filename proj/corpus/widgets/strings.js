var a = "left";
var b = "right";
var both = a + "-" + b;
var same = a === "left";
var tag = typeof both;
same && tag === "string";
