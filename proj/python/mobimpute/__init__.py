from ._mobimpute import *  # noqa: F401,F403
