"""
Bundled example arrangements and the tables they must reproduce.

Tables use 1-based hyperplane indices and chamber names, the way they are
written by hand; `Fixture.chamber_names` maps each name to its sign vector.
"""

from dataclasses import dataclass, field
from typing import Dict, Mapping, Tuple

from .chambers import SignVector, parse_signs

FIG1_TEXT = """\
# Four lines in the plane.  H1, H2 and H3 meet at (200, 60); the flag
# starts below every intersection point and runs along y = 20.
dim 2
1 -2 -80
1 0 -200
5 4 -1240
2 5 -890
flag
point 170 20
dir 1 0
dir 0 1
"""

Word = Tuple[int, ...]


@dataclass(frozen=True)
class Fixture:
    """
    A named arrangement with the tables it is expected to reproduce.

    xi: monomial word -> {chamber name: coefficient}
    nu: chamber name -> {monomial word: coefficient}
    wedge: chamber name -> {target name: (N, separating set)}
    """
    name: str
    text: str
    chamber_names: Mapping[str, str]
    strata: Tuple[Tuple[str, ...], ...]
    sgn: Mapping[str, int]
    bounded: Tuple[str, ...]
    xi: Mapping[Word, Mapping[str, int]] = field(default_factory=dict)
    nu: Mapping[str, Mapping[Word, int]] = field(default_factory=dict)
    wedge: Mapping[str, Mapping[str, Tuple[int, Tuple[int, ...]]]] = field(default_factory=dict)

    def sign_vector(self, name: str) -> SignVector:
        return parse_signs(self.chamber_names[name])

    def names_by_sign(self) -> Dict[SignVector, str]:
        return {parse_signs(signs): name for name, signs in self.chamber_names.items()}


FIG1 = Fixture(
    name='fig1',
    text=FIG1_TEXT,
    chamber_names={
        'A': '+---',
        'B1': '----', 'B2': '++--', 'B3': '+++-', 'B4': '++++',
        'C1': '-++-', 'C2': '--+-', 'C3': '-+++', 'C4': '--++', 'C5': '---+',
    },
    strata=(('A',), ('B1', 'B2', 'B3', 'B4'), ('C1', 'C2', 'C3', 'C4', 'C5')),
    sgn={'A': 1, 'B1': -1, 'B2': 1, 'B3': 1, 'B4': 1,
         'C1': 1, 'C2': 1, 'C3': 1, 'C4': 1, 'C5': 1},
    bounded=('C1', 'C2'),
    xi={
        (): {'A': 1},
        (1,): {'B1': -1},
        (2,): {'B2': 1, 'B3': 1, 'B4': 1},
        (3,): {'B3': 1, 'B4': 1},
        (4,): {'B4': 1},
        (1, 2): {'C1': -1, 'C3': -1},
        (1, 3): {'C1': -1, 'C2': -1, 'C3': -1, 'C4': -1},
        (1, 4): {'C3': -1, 'C4': -1, 'C5': -1},
        (2, 4): {'C4': -1, 'C5': -1},
        (3, 4): {'C5': -1},
    },
    nu={
        'A': {(): 1},
        'B1': {(1,): -1},
        'B2': {(2,): 1, (3,): -1},
        'B3': {(3,): 1, (4,): -1},
        'B4': {(4,): 1},
        'C1': {(1, 2): -1, (1, 4): 1, (2, 4): -1},
        'C2': {(1, 2): 1, (1, 3): -1, (2, 4): 1, (3, 4): -1},
        'C3': {(1, 4): -1, (2, 4): 1},
        'C4': {(2, 4): -1, (3, 4): 1},
        'C5': {(3, 4): -1},
    },
    wedge={
        'A': {'B1': (-1, (1,)), 'B2': (1, (2,)), 'B3': (1, (2, 3)), 'B4': (1, (2, 3, 4))},
        'B1': {'C1': (-1, (2, 3)), 'C2': (-1, (3,)), 'C3': (-1, (2, 3, 4)),
               'C4': (-1, (3, 4)), 'C5': (-1, (4,))},
        'B2': {'C2': (1, (1, 2, 3)), 'C4': (1, (1, 2, 3, 4))},
        'B3': {'C1': (-1, (1,)), 'C2': (-1, (1, 2)), 'C5': (1, (1, 2, 3, 4))},
        'B4': {'C3': (-1, (1,)), 'C4': (-1, (1, 2)), 'C5': (-1, (1, 2, 3))},
    },
)

FIXTURES = {FIG1.name: FIG1}


def load_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(sorted(FIXTURES))}") from None
