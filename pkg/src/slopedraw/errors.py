"""Module-qualified error types surfaced by the library and the CLI."""


class SlopedrawError(Exception):
    code = "error"

    def __init__(self, message=""):
        super().__init__(message or self.code)


# graph_core
class InvalidEmbedding(SlopedrawError):
    code = "graph_core.invalid_embedding"


class WrongClass(SlopedrawError):
    code = "graph_core.wrong_class"


# frames
class NotContractibleClass(SlopedrawError):
    code = "frames.not_contractible_class"


class CycleTooShort(SlopedrawError):
    code = "frames.cycle_too_short"


# spq
class NotAlmost3Connected(SlopedrawError):
    code = "spq.not_almost_3_connected"


class BadApexChoice(SlopedrawError):
    code = "spq.bad_apex_choice"


# slope_set
class DegenerateParameters(SlopedrawError):
    code = "slope_set.degenerate_parameters"


class NoIntersection(SlopedrawError):
    code = "slope_set.no_intersection"


# core_drawer
class GoodTriangleUnderflow(SlopedrawError):
    code = "core_drawer.good_triangle_underflow"


class TooManyChildren(SlopedrawError):
    code = "core_drawer.too_many_children"


# assembler
class NotThreeConnected(SlopedrawError):
    code = "assembler.not_three_connected"


class NotOnPseudotreeCycle(SlopedrawError):
    code = "assembler.not_on_pseudotree_cycle"


class CaseRecursionOverflow(SlopedrawError):
    code = "assembler.case_recursion_overflow"


class DrawUnsupported(SlopedrawError):
    code = "assembler.draw_unsupported"


class ConstructionFailure(SlopedrawError):
    """A geometric guarantee of the construction failed its exact check."""

    code = "assembler.construction_failure"


# aux_draw
class NotPartial2Tree(SlopedrawError):
    code = "aux_draw.not_partial_2_tree"


class NotPlanarWithGivenOuterFace(SlopedrawError):
    code = "aux_draw.not_planar_with_given_outer_face"


class LinearSolveSingular(SlopedrawError):
    code = "aux_draw.linear_solve_singular"


# verify
class Infeasible(SlopedrawError):
    code = "verify.infeasible"


class SearchExhausted(SlopedrawError):
    code = "verify.search_exhausted"
