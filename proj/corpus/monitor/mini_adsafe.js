// A miniature ADsafe-style reference monitor. Every exported function is
// annotated [Widget | Global] Widget ... -> Widget: callers are untrusted,
// so this may be the global object and any argument may be any widget
// value. Runtime guards narrow those types before anything sensitive runs.

var string_check = function (string)
/*: [Widget | Global] Widget -> Str */
{
    if (typeof string !== "string") {
        throw "ADsafe: string violation";
    }
    return string;
};

// Returns true for blacklisted property names. The body leans on charAt
// and slice, which is beyond the checker; the ascribed type is what the
// narrowing needs: a false result proves the name avoided the blacklist.
var reject_name = function (name)
/*: cheat (("arguments", "callee", "caller", "constructor", "eval", "prototype",
            "unwatch", "valueOf", "watch", "__proto__", "___nodes___", "___star___")+ -> True)
         & (("arguments", "callee", "caller", "constructor", "eval", "prototype",
            "unwatch", "valueOf", "watch", "__proto__", "___nodes___", "___star___")- -> True | False) */
{
    return typeof name !== "string" ||
        name.charAt(0) === "_" || name.slice(-1) === "_" ||
        name === "arguments" || name === "callee" || name === "caller" ||
        name === "constructor" || name === "eval" || name === "prototype" ||
        name === "unwatch" || name === "valueOf" || name === "watch";
};

var makeableTagName = {
    "div": "div",
    "p": "p",
    "b": "b",
    "i": "i",
    "li": "li",
    "ul": "ul"
};

var bunch_value = function (value)
/*: [Widget | Global] Widget ... -> Widget */
{
    if (this === window) {
        throw "ADsafe: global this";
    }
    value = string_check(value);
    var nodes = this["___nodes___"];
    if (typeof nodes === "object") {
        nodes[0].appendChild(document.createTextNode(value));
    }
    return this;
};

var dom = {
    tag: function (tagName)
    /*: [Widget | Global] Widget ... -> Widget */
    {
        tagName = string_check(tagName);
        var approved = makeableTagName[tagName];
        if (typeof approved === "string") {
            return {
                "___nodes___": [document.createElement(approved)],
                "value": bunch_value
            };
        }
        throw "ADsafe: bad tag";
    },

    append: function (bunch, child)
    /*: [Widget | Global] Widget ... -> Widget */
    {
        if (this === window) {
            throw "ADsafe: global this";
        }
        var mine = bunch["___nodes___"];
        var elts = child["___nodes___"];
        if (typeof mine === "object") {
            if (typeof elts === "object") {
                mine[0].appendChild(elts[0]);
            }
        }
        return bunch;
    },

    q: function (text)
    /*: [Widget | Global] Widget ... -> Widget */
    {
        if (this === window) {
            throw "ADsafe: global this";
        }
        text = string_check(text);
        if (reject_name(text)) {
            throw "ADsafe: bad query";
        }
        return {"___nodes___": [], "___star___": false};
    },

    style: function (name, value)
    /*: [Widget | Global] Widget ... -> Widget */
    {
        if (this === window) {
            throw "ADsafe: global this";
        }
        name = string_check(name);
        value = string_check(value);
        if (url_re.test(value)) {
            throw "ADsafe: url in style";
        }
        if (reject_name(name)) {
            throw "ADsafe: bad style name";
        }
        var nodes = this["___nodes___"];
        if (typeof nodes === "object") {
            var sty = window.getComputedStyle(nodes[0]);
            sty[name] = value;
        }
        return this;
    },

    getStyle: function (name)
    /*: [Widget | Global] Widget ... -> Widget */
    {
        if (this === window) {
            throw "ADsafe: global this";
        }
        name = string_check(name);
        if (reject_name(name)) {
            throw "ADsafe: bad style name";
        }
        var nodes = this["___nodes___"];
        if (typeof nodes === "object") {
            var sty = window.getComputedStyle(nodes[0]);
            return sty[name];
        }
        throw "ADsafe: empty bunch";
    }
};

var adsafe_lib = {
    later: function (func, timeout)
    /*: Widget * Widget -> Widget */
    {
        if (typeof func === "function") {
            setTimeout(func, timeout || 0);
        } else {
            throw "ADsafe: later needs a function";
        }
        return undefined;
    }
};
