"""Run configuration: one INI file captures every knob so a run can be
reproduced from (input, config, seed) alone. Command-line flags override
file values; the NIGHTJAR_CONFIG environment variable supplies a default
config path.

Schema (all sections optional)::

    [detect]
    id_min_length = 8
    id_min_letters = 2
    id_min_digits = 2
    zip_cue_words =                ; comma list; empty -> builtin cue lexicon
    recognizers = builtin          ; comma list: builtin | external:CMD
    adapter_timeout = 30

    [gazetteer]
    path =                         ; empty -> bundled gazetteer
    case_insensitive = false

    [label_map]                    ; external-scheme label -> taxonomy label
    GPE = LOCATION                 ; value "drop" removes a default mapping

    [mask]
    seed = 0
    policy = default               ; default | placeholder | synthetic | delete
    pools =                        ; empty -> bundled value pools
    cross_tweet_consistency = false

    [mask.actions]                 ; per-label action overrides
    URL = delete

    [mask.templates]               ; per-label placeholder overrides
    URL = <URL>
"""
from __future__ import annotations

import configparser
import shlex
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import detectors
from .masking import (
    Action,
    DEFAULT_TEMPLATES,
    ReplacementPolicy,
    ValuePool,
    default_actions,
    default_value_pool,
)
from .model import ConfigError, DataError, ENTITY_CLASS, EntityLabel
from .recognize import (
    DEFAULT_LABEL_MAP,
    Gazetteer,
    RecognizerHandle,
    RecognizerKind,
    default_gazetteer,
)


@dataclass(frozen=True)
class PipelineConfig:
    """Everything the detect/mask pipeline needs; picklable so worker
    processes can rebuild their state from it."""

    id_min_length: int = detectors.ID_MIN_LENGTH
    id_min_letters: int = detectors.ID_MIN_LETTERS
    id_min_digits: int = detectors.ID_MIN_DIGITS
    zip_cue_words: tuple[str, ...] = ()  # empty -> builtin cue lexicon
    recognizer_specs: tuple[str, ...] = ("builtin",)
    adapter_timeout: float = 30.0
    gazetteer_path: str | None = None
    case_insensitive: bool = False
    label_map: dict[str, EntityLabel] = field(
        default_factory=lambda: dict(DEFAULT_LABEL_MAP))
    seed: int = 0
    policy_name: str = "default"
    actions: dict[EntityLabel, Action] = field(default_factory=default_actions)
    templates: dict[EntityLabel, str] = field(
        default_factory=lambda: dict(DEFAULT_TEMPLATES))
    pools_path: str | None = None
    cross_tweet_consistency: bool = False

    def gazetteer(self) -> Gazetteer:
        if self.gazetteer_path:
            return Gazetteer.from_file(self.gazetteer_path,
                                       case_sensitive=not self.case_insensitive)
        return default_gazetteer(case_sensitive=not self.case_insensitive)

    def value_pool(self) -> ValuePool:
        if self.pools_path:
            return ValuePool.from_file(self.pools_path)
        return default_value_pool()

    def policy(self) -> ReplacementPolicy:
        return ReplacementPolicy(
            actions=dict(self.actions),
            templates=dict(self.templates),
            seed=self.seed,
            cross_tweet_consistency=self.cross_tweet_consistency,
        )

    def recognizers(self) -> tuple[RecognizerHandle, ...]:
        handles: list[RecognizerHandle] = []
        counter = 0
        for spec in self.recognizer_specs:
            spec = spec.strip()
            if not spec:
                continue
            if spec == "builtin":
                handles.append(RecognizerHandle(
                    name="builtin", kind=RecognizerKind.BUILTIN,
                    label_map=dict(self.label_map)))
            elif spec.startswith("external:"):
                rest = spec[len("external:"):]
                name, eq, cmd = rest.partition("=")
                if eq and name.isidentifier():
                    command = shlex.split(cmd)
                else:
                    counter += 1
                    name = f"external{counter}"
                    command = shlex.split(rest)
                if not command:
                    raise ConfigError(f"empty adapter command in {spec!r}")
                handles.append(RecognizerHandle(
                    name=name, kind=RecognizerKind.EXTERNAL,
                    label_map=dict(self.label_map), command=tuple(command)))
            else:
                raise ConfigError(f"unknown recognizer {spec!r} (expected "
                                  f"'builtin' or 'external:CMD')")
        seen: set[str] = set()
        for handle in handles:
            if handle.name in seen:
                raise ConfigError(f"duplicate recognizer name {handle.name!r}")
            seen.add(handle.name)
        return tuple(handles)


def _policy_actions(name: str) -> dict[EntityLabel, Action]:
    if name == "default":
        return default_actions()
    if name == "placeholder":
        return {label: Action.PLACEHOLDER for label in EntityLabel}
    if name == "delete":
        return {label: Action.DELETE for label in EntityLabel}
    if name == "synthetic":
        actions = default_actions()
        for label in ENTITY_CLASS:
            actions[label] = Action.SYNTHETIC
        actions[EntityLabel.USERNAME] = Action.SYNTHETIC
        return actions
    raise ConfigError(f"unknown policy {name!r} (expected default, "
                      f"placeholder, synthetic, or delete)")


def load_config(path: str | Path | None) -> PipelineConfig:
    """Parse the INI file into a PipelineConfig; ``None`` gives defaults."""
    cfg = PipelineConfig()
    if path is None:
        return cfg
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc

    try:
        if parser.has_section("detect"):
            sec = parser["detect"]
            cfg = replace(
                cfg,
                id_min_length=sec.getint("id_min_length", cfg.id_min_length),
                id_min_letters=sec.getint("id_min_letters", cfg.id_min_letters),
                id_min_digits=sec.getint("id_min_digits", cfg.id_min_digits),
                adapter_timeout=sec.getfloat("adapter_timeout",
                                             cfg.adapter_timeout),
            )
            if "recognizers" in sec:
                cfg = replace(cfg, recognizer_specs=tuple(
                    s.strip() for s in sec["recognizers"].split(",") if s.strip()))
            if "zip_cue_words" in sec:
                cfg = replace(cfg, zip_cue_words=tuple(
                    s.strip() for s in sec["zip_cue_words"].split(",")
                    if s.strip()))
        if parser.has_section("gazetteer"):
            sec = parser["gazetteer"]
            cfg = replace(
                cfg,
                gazetteer_path=sec.get("path") or None,
                case_insensitive=sec.getboolean("case_insensitive",
                                                cfg.case_insensitive),
            )
        if parser.has_section("label_map"):
            label_map = dict(DEFAULT_LABEL_MAP)
            for key, value in parser["label_map"].items():
                key = key.upper()
                if value.strip().lower() == "drop":
                    label_map.pop(key, None)
                else:
                    label_map[key] = EntityLabel.parse(value.strip())
            cfg = replace(cfg, label_map=label_map)
        if parser.has_section("mask"):
            sec = parser["mask"]
            cfg = replace(
                cfg,
                seed=sec.getint("seed", cfg.seed),
                pools_path=sec.get("pools") or None,
                cross_tweet_consistency=sec.getboolean(
                    "cross_tweet_consistency", cfg.cross_tweet_consistency),
            )
            if "policy" in sec:
                cfg = replace(cfg, policy_name=sec["policy"],
                              actions=_policy_actions(sec["policy"]))
        if parser.has_section("mask.actions"):
            actions = dict(cfg.actions)
            for key, value in parser["mask.actions"].items():
                try:
                    actions[EntityLabel.parse(key.upper())] = Action(value.strip())
                except ValueError:
                    raise ConfigError(f"unknown action {value!r} for "
                                      f"{key}") from None
            cfg = replace(cfg, actions=actions)
        if parser.has_section("mask.templates"):
            templates = dict(cfg.templates)
            for key, value in parser["mask.templates"].items():
                templates[EntityLabel.parse(key.upper())] = value
            cfg = replace(cfg, templates=templates)
    except (ValueError, DataError) as exc:
        raise ConfigError(f"bad value in config {path}: {exc}") from exc
    return cfg
