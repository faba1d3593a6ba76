import argparse
import logging
import sys

from dotenv import load_dotenv

from lib import __version__
from lib.command_handler import CommandHandler
from lib.exceptions import ConfigError
from lib.models.run_config import RunConfig

load_dotenv()


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="YAML file with run settings; flags override it")
    parser.add_argument("--output-dir", dest="output_dir")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--lenient", dest="strict", action="store_false", default=None,
                        help="skip malformed sentences instead of failing")
    parser.add_argument("--exact-labels", dest="exact_labels", action="store_true", default=None,
                        help="compare relation subtypes too")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")


def _add_bootstrap_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--resamples", dest="n_resamples", type=int)
    parser.add_argument("--two-sided", dest="two_sided", action="store_true", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="udstab", description="Cross-lingual stability of UD edges, label transformations and pattern RE."
    )
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    stability = commands.add_parser("stability", help="classify target edges and score parsers per category")
    _add_common(stability)
    stability.add_argument("--source")
    stability.add_argument("--target-gold", dest="target_gold")
    stability.add_argument("--predicted", nargs="+", help="prediction files or directories of them")
    stability.add_argument("--supervised-predicted", dest="supervised_predicted", nargs="+")
    stability.add_argument("--alignments")
    stability.add_argument("--alignment-format", dest="alignment_format", choices=["pharaoh", "jsonl"])
    stability.add_argument("--zero-based", dest="zero_based_alignments", action="store_true", default=None)
    stability.add_argument("--function-words", dest="function_word_upos", nargs="+", metavar="UPOS")
    stability.add_argument("--exclude-punct", dest="exclude_punct", action="store_true", default=None)

    transform = commands.add_parser("transform", help="rewrite labels of a treebank")
    _add_common(transform)
    transform.add_argument("transformation", choices=["nominal", "predicate", "oblique"])
    transform.add_argument("--treebank")
    transform.add_argument("--process", dest="process_annotation")
    transform.add_argument("--snacs", dest="snacs_annotation")
    transform.add_argument("--adverbial", dest="adverbial_tags", nargs="+", metavar="SUPERSENSE")
    transform.add_argument("--harmonize", choices=["global", "process"])
    transform.add_argument("--allow-missing", dest="allow_missing", action="store_true", default=None)

    histogram = commands.add_parser("histogram", help="count dependency labels")
    _add_common(histogram)
    histogram.add_argument("--treebank")

    relation = commands.add_parser("re", help="pattern-based relation extraction")
    re_commands = relation.add_subparsers(dest="re_command", required=True)
    for name in ("train", "predict", "score", "compare", "evaluate"):
        sub = re_commands.add_parser(name)
        _add_common(sub)
        sub.add_argument("--train", dest="train_instances")
        sub.add_argument("--test", dest="test_instances")
        sub.add_argument("--train-variant-parses", dest="train_variant_parses")
        sub.add_argument("--test-variant-parses", dest="test_variant_parses")
        sub.add_argument("--lexicon")
        sub.add_argument("--dictionary")
        sub.add_argument("--scheme")
        sub.add_argument("--predictions")
        sub.add_argument("--baseline", dest="baseline_predictions")
        sub.add_argument("--setting", choices=["standard", "parallel", "ensemble"])
        sub.add_argument("--excluded-sources", dest="excluded_sources")
        sub.add_argument("--positives-only", dest="count_negatives", action="store_false", default=None)
        sub.add_argument("--trigger-free", dest="include_trigger_free", action="store_true", default=None)
        _add_bootstrap_flags(sub)

    bootstrap = commands.add_parser("bootstrap", help="paired bootstrap of two parsers against gold")
    _add_common(bootstrap)
    bootstrap.add_argument("--gold")
    bootstrap.add_argument("--system-a", dest="system_a")
    bootstrap.add_argument("--system-b", dest="system_b")
    bootstrap.add_argument("--exclude-punct", dest="exclude_punct", action="store_true", default=None)
    _add_bootstrap_flags(bootstrap)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = f"re_{args.re_command}" if args.command == "re" else args.command
    overrides = {key: value for key, value in vars(args).items() if key in RunConfig.model_fields}
    try:
        config = RunConfig.load(args.config, overrides)
    except ConfigError as e:
        logging.basicConfig(level=logging.INFO)
        logging.getLogger(__name__).error(str(e))
        return 1

    level = "DEBUG" if args.verbose else "WARNING" if args.quiet else config.log_level
    logging.basicConfig(level=getattr(logging, level), format="%(levelname)s %(name)s: %(message)s")
    return CommandHandler(config).run(command)


if __name__ == "__main__":
    sys.exit(main())
