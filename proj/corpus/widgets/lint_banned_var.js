// A harmless local that merely shares its name with a banned field; a
// name-based filter rejects it, the types do not.
var constructor = 1;
var prototype = "name only";
constructor + 2;
