"""Generic base class for orthonormal image transforms."""


class BaseTransform:
    """Generic base class for orthonormal image transforms.

    Concrete subclasses map a 2D image (rows x cols, both powers of two) to a
    coefficient array of the same shape and back. The pair must be exact
    inverses, and inverse() must also be the adjoint of forward().
    """

    def __init__(self, shape):
        """Store the image geometry the transform operates on."""
        self.shape = tuple(shape)

    def forward(self, x):
        """Analyze an image.

        Params
        ======
        - x: 2D NumPy array with self.shape

        Returns
        =======
        - coefficients: 2D NumPy array with self.shape
        """
        raise NotImplementedError("{} must override forward()".format(self.__class__.__name__))

    def inverse(self, coeffs):
        """Synthesize an image from coefficients; exact inverse and adjoint of forward()."""
        raise NotImplementedError("{} must override inverse()".format(self.__class__.__name__))
