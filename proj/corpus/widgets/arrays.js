var a = [1, 2, 3];
var b = a.concat([4, 5]);
a.push("six");
var text = b.join("-");
var len = a.length;
len;
