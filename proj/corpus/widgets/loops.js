var keep = true;
var log = [];
while (keep) {
    log.push("tick");
    keep = false;
}
log.length;
