var make = function (label) {
    return {
        label: label,
        items: [],
        add: function (box, item) {
            box.items.push(item);
            return box;
        }
    };
};
var box = make("tray");
box.add(box, "pencil");
box.items.length;
