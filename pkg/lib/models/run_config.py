# coding=utf-8
import hashlib
import json
import os
import pathlib
from typing import Any, List, Literal, Mapping, Optional

import pydantic
import yaml

from lib import __version__
from lib.exceptions import ConfigError

# Environment variables and the settings they fill in.
ENVIRONMENT = {
    "UDSTAB_SEED": "seed",
    "UDSTAB_RESAMPLES": "n_resamples",
    "UDSTAB_OUTPUT_DIR": "output_dir",
    "UDSTAB_LOG_LEVEL": "log_level",
}


class RunConfig(pydantic.BaseModel):
    """
    Everything one command needs: input paths, policy flags and output
    location. Values come from defaults, then the environment, then a YAML
    file, then command-line flags, each overriding the one before.
    """

    model_config = pydantic.ConfigDict(frozen=True, extra="forbid")

    # stability
    source: Optional[pathlib.Path] = None
    target_gold: Optional[pathlib.Path] = None
    predicted: List[pathlib.Path] = pydantic.Field(default_factory=list)
    supervised_predicted: List[pathlib.Path] = pydantic.Field(default_factory=list)
    alignments: Optional[pathlib.Path] = None
    alignment_format: Literal["pharaoh", "jsonl"] = "pharaoh"
    zero_based_alignments: bool = False
    function_word_upos: Optional[List[str]] = None
    exact_labels: bool = False
    exclude_punct: bool = False

    # transform / histogram
    treebank: Optional[pathlib.Path] = None
    transformation: Optional[Literal["nominal", "predicate", "oblique"]] = None
    process_annotation: Optional[pathlib.Path] = None
    snacs_annotation: Optional[pathlib.Path] = None
    adverbial_tags: Optional[List[str]] = None
    harmonize: Literal["global", "process"] = "global"
    allow_missing: bool = False

    # relation extraction
    train_instances: Optional[pathlib.Path] = None
    test_instances: Optional[pathlib.Path] = None
    train_variant_parses: Optional[pathlib.Path] = None
    test_variant_parses: Optional[pathlib.Path] = None
    lexicon: Optional[pathlib.Path] = None
    dictionary: Optional[pathlib.Path] = None
    scheme: str = "vanilla"
    predictions: Optional[pathlib.Path] = None
    baseline_predictions: Optional[pathlib.Path] = None
    setting: Literal["standard", "parallel", "ensemble"] = "standard"
    excluded_sources: Optional[pathlib.Path] = None
    count_negatives: bool = True
    include_trigger_free: bool = False

    # bootstrap
    gold: Optional[pathlib.Path] = None
    system_a: Optional[pathlib.Path] = None
    system_b: Optional[pathlib.Path] = None
    n_resamples: int = pydantic.Field(default=10_000, ge=1)
    seed: int = pydantic.Field(default=0, ge=0)
    two_sided: bool = False

    output_dir: pathlib.Path = pathlib.Path("output")
    strict: bool = True
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"

    @classmethod
    def load(
        cls,
        config_file: str | pathlib.Path | None = None,
        overrides: Mapping[str, Any] | None = None,
        environ: Mapping[str, str] | None = None,
    ) -> "RunConfig":
        """
        :param config_file: optional YAML file with any of the fields.
        :param overrides: command-line values; None means "not given".
        :param environ: defaults to os.environ.
        """
        environ = os.environ if environ is None else environ
        values: dict[str, Any] = {
            field: environ[variable] for variable, field in ENVIRONMENT.items() if environ.get(variable)
        }
        if config_file is not None:
            try:
                with open(config_file, encoding="utf-8") as in_stream:
                    from_file = yaml.load(in_stream, Loader=yaml.SafeLoader) or {}
            except (OSError, yaml.YAMLError) as e:
                raise ConfigError(f"Cannot read config file {config_file}: {e}") from e
            if not isinstance(from_file, dict):
                raise ConfigError(f"Config file {config_file} must hold a mapping")
            values.update(from_file)
        values.update({key: value for key, value in (overrides or {}).items() if value is not None})
        try:
            return cls.model_validate(values)
        except pydantic.ValidationError as e:
            raise ConfigError(f"Invalid configuration:\n{e}") from e

    def config_hash(self) -> str:
        """
        SHA-256 of the canonical JSON form, logging level left out.
        """
        canonical = json.dumps(
            self.model_dump(mode="json", exclude={"log_level"}), sort_keys=True, separators=(",", ":")
        )
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def report_metadata(self) -> dict:
        return {"config_hash": self.config_hash(), "seed": self.seed, "version": __version__}

    def require(self, *names: str):
        """
        Check that the named path settings are set and exist.
        """
        problems = []
        for name in names:
            value = getattr(self, name)
            paths = value if isinstance(value, list) else [value]
            if value is None or not paths:
                problems.append(f"{name} is not set")
                continue
            problems.extend(f"{name}: {path} does not exist" for path in paths if not pathlib.Path(path).exists())
        if problems:
            raise ConfigError("Missing inputs: " + "; ".join(problems))
