from enum import Enum


class EdgeCategory(str, Enum):
    FULLY_ALIGNED = "FullyAligned"
    PARTIALLY_ALIGNED = "PartiallyAligned"
    UNALIGNED = "Unaligned"
    MISALIGNED = "Misaligned"
    FLIPPED = "Flipped"
    FUNCTION_WORD = "FunctionWord"

    @property
    def display_name(self) -> str:
        return DISPLAY_NAMES[self]


# Row order of the per-category tables.
CATEGORY_ORDER = (
    EdgeCategory.FULLY_ALIGNED,
    EdgeCategory.PARTIALLY_ALIGNED,
    EdgeCategory.UNALIGNED,
    EdgeCategory.MISALIGNED,
    EdgeCategory.FLIPPED,
    EdgeCategory.FUNCTION_WORD,
)

DISPLAY_NAMES = {
    EdgeCategory.FULLY_ALIGNED: "Fully Aligned",
    EdgeCategory.PARTIALLY_ALIGNED: "Partially Aligned",
    EdgeCategory.UNALIGNED: "Unaligned",
    EdgeCategory.MISALIGNED: "Misaligned",
    EdgeCategory.FLIPPED: "Flipped",
    EdgeCategory.FUNCTION_WORD: "Func Word",
}
