var obj = {};
obj.__proto__;
