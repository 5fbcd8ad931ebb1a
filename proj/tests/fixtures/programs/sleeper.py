import time


def target(x):
    time.sleep(10)
    return x
