var nothing = null;
nothing.field;
