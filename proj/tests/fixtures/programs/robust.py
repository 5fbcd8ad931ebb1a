def robust(n, s, flag):
    # Never raises for int, str, bool arguments.
    return (n % 7, len(s), not flag)
