import os


def target(name):
    with open(name, "w") as f:
        f.write("written by the candidate\n")
    return os.getcwd()
