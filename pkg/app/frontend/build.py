"""From a configuration file on disk to a ready-to-run SpecConfig and solver backend."""
import hashlib
from dataclasses import replace
from pathlib import Path

from app.errors import ConfigurationError
from app.frontend.ir import ConfigFile
from app.frontend.parser import parse_config
from app.frontend.paths import compile_config
from app.inference.config import SpecConfig
from app.runtime.executor import Runtime
from app.smt.backend import SmtBackend


def read_config_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigurationError(f"Configuration file '{path}' does not exist.")
    except UnicodeDecodeError:
        raise ConfigurationError(f"Configuration file '{path}' is not UTF-8 text.")


def config_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def load_config(path: Path) -> ConfigFile:
    return parse_config(read_config_text(path))


def build_spec_config(
    cfg: ConfigFile,
    name: str = "config",
    seed: int | None = None,
    samples: int | None = None,
    max_qvars: int | None = None,
    weaken_bound: float | None = None,
) -> SpecConfig:
    """Flags given here override the values in the configuration file."""
    gen = cfg.generator
    if seed is not None:
        gen = replace(gen, seed=seed)
    if samples is not None:
        gen = replace(gen, samples_per_round=samples)
    return SpecConfig(
        queries=compile_config(cfg),
        predicates=cfg.method_predicates,
        functions={d.name: d.signature for d in cfg.libraries},
        runtime=Runtime(cfg, gen),
        k_max=cfg.limits.max_qvars if max_qvars is None else max_qvars,
        weaken_bound=cfg.limits.weaken_bound if weaken_bound is None else weaken_bound,
        name=name,
    )


def build_backend(cfg: ConfigFile, timeout_ms: int | None = None) -> SmtBackend:
    return SmtBackend(cfg.method_predicates, timeout_ms=timeout_ms or cfg.solver.timeout_ms)
