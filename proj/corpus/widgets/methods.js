var counter = {
    value: 0,
    bump: function (c) {
        c.value = 1;
        return c;
    }
};
counter.bump(counter);
counter.value;
