# Copyright 2026 The AutoSafe Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# Fuzz harness. The candidate module is embedded as a string so that import
# and syntax failures surface here as setup errors rather than crashes.
#
# Exit codes: 0 success, 1 uncaught exception from the function under test
# (traceback on stderr), 2 setup failure (bad stdin, missing entry point,
# arity mismatch, candidate failing to import).
import os
import sys
import types

_CANDIDATE_SOURCE = {{candidate_source}}
_ENTRY_POINT = {{entry_point}}
_MODE = {{mode}}
_TESTS_SOURCE = {{tests_source}}

_SOURCES = {"<candidate>": _CANDIDATE_SOURCE, "<tests>": _TESTS_SOURCE}


def _exit(code):
    for stream in (sys.stdout, sys.stderr):
        try:
            stream.flush()
        except Exception:
            pass
    os._exit(code)


def _print_traceback(exc, tb):
    # Imported late: the success path never needs them.
    import linecache
    import traceback

    for name, source in _SOURCES.items():
        linecache.cache[name] = (len(source), None, source.splitlines(True), name)
    traceback.print_exception(type(exc), exc, tb)


def _setup_failure(message, exc=None):
    if exc is not None:
        _print_traceback(exc, exc.__traceback__)
    sys.stderr.write("harness setup error: " + message + "\n")
    _exit(2)


def _load(source, filename, module):
    exec(compile(source, filename, "exec"), module.__dict__)


def _reject_constant(name):
    raise ValueError("invalid JSON constant " + name)


class _ScanContext(object):
    strict = True
    object_hook = None
    object_pairs_hook = None
    parse_float = float
    parse_int = int
    parse_constant = staticmethod(_reject_constant)
    memo = {}


def _loads(raw):
    # `json` drags in `re`, which doubles interpreter start-up; the C scanner
    # alone decodes the wire format.
    try:
        import _json
    except ImportError:
        import json

        return json.loads(raw)
    ws = " \t\r\n"
    scan = _json.make_scanner(_ScanContext())
    start = len(raw) - len(raw.lstrip(ws))
    try:
        value, end = scan(raw, start)
    except StopIteration:
        raise ValueError("expected a JSON value")
    except ValueError:
        raise
    except Exception as exc:
        # Without json.decoder loaded, some scanner errors surface as
        # SystemError; any failure here still means malformed input.
        raise ValueError("malformed JSON: %s" % exc)
    if raw[end:].strip(ws):
        raise ValueError("extra data after the JSON value")
    return value


def _read_args():
    raw = sys.stdin.read()
    try:
        args = _loads(raw)
    except ValueError as exc:
        _setup_failure("stdin is not valid JSON", exc)
    if not isinstance(args, list):
        _setup_failure("stdin must be a JSON array of arguments")
    return args


def _arity_error(fn, count):
    code = getattr(fn, "__code__", None)
    if isinstance(fn, types.FunctionType) and not hasattr(fn, "__wrapped__"):
        required_kw = [
            name
            for name in code.co_varnames[code.co_argcount:code.co_argcount + code.co_kwonlyargcount]
            if name not in (fn.__kwdefaults__ or {})
        ]
        if required_kw:
            return "keyword-only parameters without defaults: %s" % ", ".join(required_kw)
        most = code.co_argcount
        least = most - len(fn.__defaults__ or ())
        if count < least or (count > most and not code.co_flags & 0x04):
            return "%s() takes %d to %d positional arguments but %d were given" % (
                fn.__name__, least, most, count)
        return None
    import inspect

    try:
        inspect.signature(fn).bind(*([None] * count))
    except TypeError as exc:
        return str(exc)
    except ValueError:
        pass
    return None


def _report_crash(exc):
    # Drop the harness frame so the traceback starts in candidate code.
    tb = exc.__traceback__
    if tb is not None and tb.tb_next is not None:
        tb = tb.tb_next
    _print_traceback(exc, tb)
    _exit(1)


def main():
    args = _read_args() if _MODE == "fuzz" else []

    module = types.ModuleType("candidate")
    module.__file__ = "<candidate>"
    sys.modules["candidate"] = module
    try:
        _load(_CANDIDATE_SOURCE, "<candidate>", module)
    except BaseException as exc:
        _setup_failure("candidate failed to load", exc)

    fn = module.__dict__.get(_ENTRY_POINT)
    if not callable(fn):
        _setup_failure("entry point %r is not a defined function" % _ENTRY_POINT)

    if _MODE == "functional":
        try:
            _load(_TESTS_SOURCE, "<tests>", module)
        except BaseException as exc:
            _setup_failure("tests failed to load", exc)
        check = module.__dict__.get("check")
        if not callable(check):
            _setup_failure("tests define no check(candidate) function")
        call, call_args = check, [fn]
    else:
        problem = _arity_error(fn, len(args))
        if problem is not None:
            _setup_failure("arity mismatch: " + problem)
        call, call_args = fn, args

    try:
        call(*call_args)
    except SystemExit as exc:
        if exc.code is None or exc.code == 0:
            _exit(0)
        _report_crash(exc)
    except BaseException as exc:
        _report_crash(exc)
    _exit(0)


main()
