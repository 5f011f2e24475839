"""Sessions with an SMT-LIB v2 solver, either a child process or the in-process z3 API."""
import logging
import math
import shutil
import subprocess
from abc import ABC, abstractmethod

from app.errors import ConfigurationError, SolverError
from app.smt.reply import balanced

logger = logging.getLogger(__name__)


class SolverSession(ABC):
    """One stateless solver instance; used for a single query and then closed."""

    @abstractmethod
    def feed(self, text: str) -> None:
        """Send commands that produce no output."""

    @abstractmethod
    def ask(self, command: str) -> str:
        """Send one command and return its reply."""

    def close(self) -> None:
        pass

    def __enter__(self) -> "SolverSession":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


class ProcessSession(SolverSession):
    def __init__(self, path: str, timeout_ms: int):
        hard_limit = max(1, math.ceil(timeout_ms / 1000)) + 1
        cmd = [path, "-in", "-smt2", f"-t:{timeout_ms}", f"-T:{hard_limit}"]
        try:
            self.proc = subprocess.Popen(
                cmd,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.STDOUT,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise SolverError(f"Cannot start solver '{path}': {exc}") from exc

    def _write(self, text: str) -> None:
        try:
            self.proc.stdin.write(text)
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise SolverError(f"Solver process closed its input: {exc}") from exc

    def feed(self, text: str) -> None:
        self._write(text if text.endswith("\n") else text + "\n")

    def ask(self, command: str) -> str:
        self._write(command + "\n")
        reply = ""
        while not balanced(reply):
            line = self.proc.stdout.readline()
            if not line:
                if reply.strip():
                    break
                raise SolverError(f"Solver exited with code {self.proc.wait()} while answering {command}")
            reply += line
        return reply.strip()

    def close(self) -> None:
        if self.proc.poll() is None:
            try:
                self.proc.stdin.write("(exit)\n")
                self.proc.stdin.flush()
            except (BrokenPipeError, OSError):
                pass
            try:
                self.proc.wait(timeout=1)
            except subprocess.TimeoutExpired:
                self.proc.kill()
                self.proc.wait()
        for stream in (self.proc.stdin, self.proc.stdout):
            if stream:
                stream.close()


class ApiSession(SolverSession):
    def __init__(self, timeout_ms: int):
        try:
            import z3
        except ImportError as exc:
            raise SolverError("The z3 Python package is not installed and no solver binary was found.") from exc
        self._z3 = z3
        self.ctx = z3.Context(timeout=timeout_ms)

    def _eval(self, text: str) -> str:
        try:
            out = self._z3.Z3_eval_smtlib2_string(self.ctx.ref(), text)
        except self._z3.Z3Exception as exc:
            raise SolverError(str(exc)) from exc
        if "(error" in out:
            raise SolverError(out.strip())
        return out

    def feed(self, text: str) -> None:
        self._eval(text)

    def ask(self, command: str) -> str:
        return self._eval(command).strip()


def open_session(transport: str, path: str, timeout_ms: int) -> SolverSession:
    """``auto`` prefers the solver binary and falls back to the z3 module."""
    if transport == "auto":
        transport = "process" if shutil.which(path) else "api"
    if transport == "process":
        return ProcessSession(path, timeout_ms)
    if transport == "api":
        return ApiSession(timeout_ms)
    raise ConfigurationError(f"Unknown SMT transport '{transport}'.")
