"""Solution families of the Pexider composite equation F((x+y)/2) + f1(x) + f2(y) = G(g1(x) + g2(y))"""

__version__ = "0.1.0"
