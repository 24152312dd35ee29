from pydantic import BaseModel, computed_field
from typing import List, Optional, Dict
from enum import Enum

class CheckStatus(str, Enum):
    PASSED = "passed"
    FAILED = "failed"

class ReportBase(BaseModel):
    subject: str
    failures: List[str] = []

    @computed_field
    @property
    def status(self) -> CheckStatus:
        return CheckStatus.FAILED if self.failures or not self.consistent() else CheckStatus.PASSED

    def consistent(self) -> bool:
        return True

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASSED

class CorrespondenceReport(ReportBase):
    """Compatible preorders versus congruences of one semilattice."""
    preorder_count: int
    congruence_count: int
    round_trip_failures: List[str] = []
    meet_failures: List[str] = []
    join_failures: List[str] = []
    order_failures: List[str] = []

    def consistent(self) -> bool:
        return (
            self.preorder_count == self.congruence_count
            and not self.round_trip_failures
            and not self.meet_failures
            and not self.join_failures
            and not self.order_failures
        )

class CountReport(ReportBase):
    """A verifier that compares two enumerated sets of the same size."""
    left_label: str
    right_label: str
    left_count: int
    right_count: int
    checked: int = 0

    def consistent(self) -> bool:
        return self.left_count == self.right_count

class InstanceReport(ReportBase):
    """A verifier that checks a property on every instance of a sweep."""
    checked: int = 0

class FixtureReport(BaseModel):
    name: str
    expected: Dict[str, str]
    actual: Dict[str, str]

    @property
    def passed(self) -> bool:
        return self.expected == self.actual

class SweepRow(BaseModel):
    theorem: str
    size: int
    index: int
    subject: str
    status: CheckStatus
    detail: Optional[str] = None
