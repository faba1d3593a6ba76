# coding=utf-8


class TreebankToolkitError(Exception):
    """
    Base class for every error raised by the toolkit.
    """


class TreeStructureError(TreebankToolkitError):
    """
    The head function of a sentence is not a single rooted tree.
    """


class ConlluFormatError(TreebankToolkitError):
    def __init__(self, message: str, sentence_ordinal: int = None, line_number: int = None):
        """
        :param message: What is wrong with the input.
        :param sentence_ordinal: 1-based position of the offending sentence in the file.
        :param line_number: 1-based line number where the problem was found.
        """
        self.message = message
        self.sentence_ordinal = sentence_ordinal
        self.line_number = line_number
        super().__init__(str(self))

    def __str__(self) -> str:
        return f"sentence {self.sentence_ordinal}, line {self.line_number}: {self.message}"


class AlignmentError(TreebankToolkitError):
    """
    An alignment does not fit the sentence pair it is attached to.
    """


class PairingError(TreebankToolkitError):
    def __init__(self, message: str, orphans=None):
        self.orphans = sorted(str(orphan) for orphan in orphans or [])
        if self.orphans:
            message = f"{message}: {', '.join(self.orphans)}"
        super().__init__(message)


class AnnotationError(TreebankToolkitError):
    """
    A sidecar annotation refers to tokens that do not exist.
    """


class ScoringError(TreebankToolkitError):
    """
    Gold and predicted data cannot be compared.
    """


class PatternSyntaxError(TreebankToolkitError):
    """
    A pattern string does not follow the pattern grammar.
    """


class ConfigError(TreebankToolkitError):
    """
    The run configuration is incomplete or inconsistent.
    """
