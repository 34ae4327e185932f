"""Lazily evaluated stages from an arrangement to its structure constants."""

import logging
from functools import cached_property
from typing import Dict, List, Optional

from .chambers import Chamber, SignVector, Stratification, enumerate_chambers, random_generic_flag, stratify
from .config import Defaults
from .geometry import Arrangement, BettiVector, Flag, IntersectionPoset, betti_vector, build_poset
from .os_algebra import ChamberBasis, StructureConstants, chamber_label, structure_constants

logger = logging.getLogger(__name__)


class Pipeline:
    """
    Every stage is computed on first access and cached.

    Args:
        arrangement: Arrangement to analyse
        flag: Flag supplied with the input, tried before any random flag
        defaults: Numerical settings (seed, flag attempts)
        names: Optional display names for chambers, keyed by sign vector
    """

    def __init__(self, arrangement: Arrangement, flag: Optional[Flag] = None,
                 defaults: Defaults = Defaults(), names: Optional[Dict[SignVector, str]] = None):
        self.arrangement = arrangement
        self.given_flag = flag
        self.defaults = defaults
        self.names = names or {}

    @cached_property
    def poset(self) -> IntersectionPoset:
        return build_poset(self.arrangement)

    @cached_property
    def betti(self) -> BettiVector:
        return betti_vector(self.poset)

    @cached_property
    def chambers(self) -> List[Chamber]:
        return enumerate_chambers(self.arrangement)

    @cached_property
    def flag(self) -> Flag:
        flag = random_generic_flag(self.arrangement, self.defaults.seed, candidate=self.given_flag,
                                   attempts=self.defaults.flag_attempts, poset=self.poset,
                                   chambers=self.chambers)
        if self.given_flag is not None and flag is not self.given_flag:
            logger.warning("supplied flag is not generic; using a random flag (seed %d)",
                           self.defaults.seed)
        return flag

    @cached_property
    def stratification(self) -> Stratification:
        return stratify(self.arrangement, self.chambers, self.flag, self.poset)

    @cached_property
    def basis(self) -> ChamberBasis:
        return ChamberBasis(self.stratification)

    @cached_property
    def constants(self) -> StructureConstants:
        return structure_constants(self.basis)

    def label(self, chamber: Chamber) -> str:
        return chamber_label(chamber, self.names)
