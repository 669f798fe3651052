"""Modal mu-calculus model checking with clock-bounded evaluation games.

Engines: standard and clock-bounded compositional semantics, bounded
evaluation games with per-binder clocks, two-counter and clock-free game
variants, and the reduction of model checking to alternating
reachability.
"""

from .formula import (FormulaError, FreeLabelError, ParseError, Sentence,
                      SyntaxIndex, alpha_equal, build_index, dual, is_normal,
                      normalize, parse, render)
from .game import (ABELARD, ELOISE, EvalGame, GameLimitError, GameStatus,
                   Position, Strategy, StrategyError, Trace,
                   interactive_player, solve)
from .kripke import (KripkeModel, ModelError, generate_family, load_model,
                     load_model_file, save_model)
from .reduction import (ReducedModel, VocabularyError, ar_winning_set,
                        build_position_model, chi, reduce_mc, solve_ar)
from .semantics import (OMEGA, BoundError, UnboundLabelError, approximant,
                        eval_bounded, eval_standard)
from .variants import (UNDETERMINED, FBoundedGame, FPosition, FreePosition,
                       f_value, free_regions, solve_fbounded, solve_free)

__version__ = "0.1.0"

__all__ = [
    "ABELARD", "ELOISE", "OMEGA", "UNDETERMINED",
    "Sentence", "SyntaxIndex", "KripkeModel", "EvalGame", "FBoundedGame",
    "Position", "FPosition", "FreePosition", "GameStatus", "Strategy",
    "Trace", "ReducedModel",
    "parse", "render", "normalize", "dual", "alpha_equal", "is_normal",
    "build_index",
    "load_model", "load_model_file", "save_model", "generate_family",
    "eval_standard", "eval_bounded", "approximant",
    "solve", "interactive_player",
    "f_value", "solve_fbounded", "solve_free", "free_regions",
    "chi", "solve_ar", "ar_winning_set", "build_position_model", "reduce_mc",
    "FormulaError", "ParseError", "FreeLabelError", "ModelError",
    "BoundError", "UnboundLabelError", "GameLimitError", "StrategyError",
    "VocabularyError",
    "__version__",
]
