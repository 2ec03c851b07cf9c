# flake8: noqa
from .decomposition import *
from .encodings import *
from .matrices import *
from .polynomials import *
from .reports import *
