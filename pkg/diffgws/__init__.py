from . import core
from . import misc
from .core import *
from .misc import *
from .version import __version__
