"""shadowlab: a numerical laboratory for shadowing semiconjugacies.

Two concrete families are implemented end to end: perturbed linear
hyperbolic maps of the 2-torus, and perturbed affine automorphisms of
square-tiled surfaces.  In both cases the package constructs the
semiconjugacy onto the model dynamics (on the plane, respectively on the
product of completed leaf spaces), computes fibers and their components at
certified resolution, and runs the component-invariance experiments.
"""

__version__ = "0.1.0"
