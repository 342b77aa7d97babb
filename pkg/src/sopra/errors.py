from __future__ import annotations


class ScenarioError(Exception):
    """A scenario document is malformed or structurally unusable.

    Carries every problem found in one pass so callers can report them
    together instead of fixing one field at a time.
    """

    def __init__(self, problems: list[str] | str):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = problems
        super().__init__("; ".join(problems))


class UnknownIdError(ScenarioError):
    """An operation referenced an id the scenario does not declare."""
