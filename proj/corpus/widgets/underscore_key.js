var o = {"_secret_": 1};
