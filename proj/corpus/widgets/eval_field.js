var o = {};
o["eval"];
