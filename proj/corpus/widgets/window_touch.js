var w = window;
