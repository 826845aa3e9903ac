from cwsclique.app.api import CWSSearch

__version__ = "0.3.1"
__author__ = "Kijoong Kwon"
__license__ = "MIT"
