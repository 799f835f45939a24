from ._fscheck import (
    run,
    parse_summary,
    pretty,
    groebner,
    normal_form,
    krull_dimension,
    quotient_basis,
    __version__,
)

__all__ = [
    "run",
    "parse_summary",
    "pretty",
    "groebner",
    "normal_form",
    "krull_dimension",
    "quotient_basis",
    "__version__",
]
