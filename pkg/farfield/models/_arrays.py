"""
Pydantic-compatible numpy array annotations
"""
from typing import Annotated

import numpy as np
from pydantic import BeforeValidator


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _real_vector(v) -> np.ndarray:
    return _frozen(np.array(v, dtype=float).reshape(-1))


def _complex_array(v) -> np.ndarray:
    return _frozen(np.array(v, dtype=complex))


def _real_array(v) -> np.ndarray:
    return _frozen(np.array(v, dtype=float))


RealVector = Annotated[np.ndarray, BeforeValidator(_real_vector)]
RealArray = Annotated[np.ndarray, BeforeValidator(_real_array)]
ComplexArray = Annotated[np.ndarray, BeforeValidator(_complex_array)]
