var spin = true;
while (spin) {
    spin = true;
}
