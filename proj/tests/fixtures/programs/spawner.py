import subprocess
import sys


def target(x):
    subprocess.Popen([sys.executable, "-c", "import time; time.sleep(30)"])
    while True:
        pass
