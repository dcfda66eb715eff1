var five = 5;
five(1);
