"""Pass/fail records for checked statements."""

from dataclasses import dataclass

from .errors import TheoremViolation


@dataclass
class LedgerEntry:
    name: str
    ok: bool
    detail: str = ""


class Ledger(list):
    """Ordered list of checked statements."""

    def add(self, name, ok, detail=""):
        self.append(LedgerEntry(name, bool(ok), detail))
        return bool(ok)

    @property
    def ok(self):
        return all(e.ok for e in self)

    def failures(self):
        return [e for e in self if not e.ok]

    def raise_on_failure(self, what):
        bad = self.failures()
        if bad:
            raise TheoremViolation(f"{what}: " + "; ".join(f"{e.name} ({e.detail})" for e in bad),
                                   {"failures": [e.name for e in bad]})
