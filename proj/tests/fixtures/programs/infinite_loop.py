def target(x):
    while True:
        x += 1
