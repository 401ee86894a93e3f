"""Circle actions of surface and orbifold groups: rotation numbers, Euler numbers,
orbifold covers and Denjoy blow-ups."""

__version__ = "0.1.0"
