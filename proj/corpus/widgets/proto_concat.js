// Computed field names defeat syntactic blacklists; the string-set types
// still catch the banned name.
var obj = {};
var x = obj["__pro" + "to__"];
