// Literal subscripts are typable even though ad hoc filters make widgets
// route every subscript through a library accessor.
var o = {a: 1, b: 2};
var v = o["a"];
v;
