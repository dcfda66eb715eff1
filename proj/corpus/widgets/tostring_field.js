var sneaky = {
    toString: function () {
        return "url(evil.xml#exp)";
    }
};
