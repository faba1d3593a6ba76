from dataclasses import dataclass

from lib.exceptions import ScoringError
from lib.models.sentence import Sentence


@dataclass(frozen=True)
class ParsedPair:
    """
    A gold tree and a parser's prediction for the same tokens.
    """

    gold: Sentence
    predicted: Sentence

    def __post_init__(self):
        gold_forms = [(token.id, token.form) for token in self.gold.tokens]
        predicted_forms = [(token.id, token.form) for token in self.predicted.tokens]
        if gold_forms != predicted_forms:
            raise ScoringError(
                f"Sentence {self.gold.sent_id}: gold and predicted tokens differ "
                f"({len(gold_forms)} vs {len(predicted_forms)} tokens)"
            )
