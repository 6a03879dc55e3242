from dataclasses import dataclass


class TextModifiers:
    """ANSI codes used in dstit reports."""

    VALID = 92  # Bright green
    INVALID = 91  # Bright red

    FORMULA = 1  # Bold
    PATH = 4  # Underline


def style_text(text: str, codes: int | list[int]) -> str:
    """Wrap text in the given ANSI codes, closing with a reset."""
    if isinstance(codes, int):
        codes = [codes]
    return f"\033[{';'.join(map(str, codes))}m{text}\033[0m"


@dataclass(frozen=True)
class Styler:
    """Styles verdict words, formulas and file paths of a report.

    A disabled styler returns every text unchanged, which is what `--no-color`
    and structured output use.
    """

    enabled: bool = True

    def __apply(self, text: str, codes: int | list[int]) -> str:
        return style_text(text, codes) if self.enabled else text

    def verdict(self, word: str, positive: bool) -> str:
        code = TextModifiers.VALID if positive else TextModifiers.INVALID
        return self.__apply(word, [code, TextModifiers.FORMULA])

    def formula(self, text: str) -> str:
        return self.__apply(text, TextModifiers.FORMULA)

    def path(self, text: str) -> str:
        return self.__apply(text, TextModifiers.PATH)
