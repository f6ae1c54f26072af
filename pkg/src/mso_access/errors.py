class MsoAccessError(Exception):
    """Base class for every error raised by this package."""


class AutomatonSyntaxError(MsoAccessError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        where = f"line {line}" + (f", column {column}" if column else "") if line else "input"
        super().__init__(f"{where}: {message}")


class FunctionalityError(MsoAccessError):
    """The automaton has an accepting run that is not valid."""


class EmptyAutomatonError(MsoAccessError):
    """No final state is reachable, so the automaton accepts nothing."""


class AmbiguityError(MsoAccessError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class OutOfBounds(MsoAccessError):
    def __init__(self, index: int, total: int):
        self.index = index
        self.total = total
        super().__init__(f"out-of-bounds: index {index} > count {total}")


class SearchBudgetExceeded(MsoAccessError):
    pass


class ProgramError(MsoAccessError):
    """An editing program is malformed or cannot be executed."""

    def __init__(self, message: str, rule: int | None = None):
        self.rule = rule
        prefix = f"rule {rule}: " if rule is not None else ""
        super().__init__(prefix + message)
