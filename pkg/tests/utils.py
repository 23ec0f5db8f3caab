# ------------------------------------------------------------------------ #
# Copyright 2024 diffgws Working Group                                     #
#                                                                          #
# Licensed under the Apache License, Version 2.0 (the "License");          #
# you may not use this file except in compliance with the License.         #
# You may obtain a copy of the License at                                  #
#                                                                          #
#     http://www.apache.org/licenses/LICENSE-2.0                           #
#                                                                          #
# Unless required by applicable law or agreed to in writing, software      #
# distributed under the License is distributed on an "AS IS" BASIS,        #
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. #
# See the License for the specific language governing permissions and      #
# limitations under the License.                                           #
# ------------------------------------------------------------------------ #

import functools
import math
import time
import warnings

import numpy as np
import torch

from diffgws.misc.gradcheck import central_difference


def is_array(x):
    return type(x) is list or type(x) is tuple


def compose(*fs):
    def compose2_outer_kwargs(f, g):
        return lambda *args, **kwargs: f(g(*args), **kwargs)

    return functools.reduce(compose2_outer_kwargs, fs)


def allclose(a, b, rtol=None, atol=None):
    is_double = torch.get_default_dtype() == torch.float64
    if rtol is None:
        rtol = 1e-5 if is_double else 1e-4
    if atol is None:
        atol = 1e-8 if is_double else 1e-6
    if torch.is_tensor(a):
        a = a.detach().cpu().numpy()
    if torch.is_tensor(b):
        b = b.detach().cpu().numpy()
    return np.allclose(a, b, rtol=rtol, atol=atol)


def sphere_contacts(m, seed=0, radius=1.0):
    """Random contacts on a sphere with inward normals."""
    g = torch.Generator().manual_seed(seed)
    p = torch.randn(m, 3, generator=g)
    p = radius * p / p.norm(dim=-1, keepdim=True)
    n = -p / radius
    return p, n


def ring_contacts(m, radius=1.0, z=0.0):
    """Contacts evenly spaced on a horizontal circle, pointing to its center."""
    phi = 2 * math.pi * torch.arange(m) / m
    p = torch.stack(
        (radius * torch.cos(phi), radius * torch.sin(phi), torch.full_like(phi, z)),
        dim=-1,
    )
    n = -p.clone()
    n[:, 2] = 0
    n = n / n.norm(dim=-1, keepdim=True)
    return p, n


def fc5_contacts():
    """Force closure contacts: an equilateral triangle on the equator and both
    poles of the unit sphere."""
    p3, n3 = ring_contacts(3)
    p = torch.cat((p3, torch.tensor([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])))
    n = torch.cat((n3, torch.tensor([[0.0, 0.0, -1.0], [0.0, 0.0, 1.0]])))
    return p, n


def finite_difference(fn, x, h=1e-6):
    return central_difference(fn, x, h)


def check_differentiable(device, modules, shapes, opt={}, load=1):
    if device == "cuda" and not torch.cuda.is_available():
        return

    if not is_array(modules):
        modules = [modules]
    if not is_array(shapes[0]):
        shapes = [shapes]

    x = []
    for shape in shapes:
        x.append(torch.randn(*shape, requires_grad=True, device=device))

    module = compose(*[m.to(device) if hasattr(m, "to") else m for m in modules])
    optimizer = torch.optim.SGD(x, lr=0.01)

    s = time.process_time()
    for _ in range(load):
        y = module(*x, **opt)
        optimizer.zero_grad()
        loss = y.mean()
        loss.backward()
        optimizer.step()
    e = time.process_time()

    if load > 1:
        print(f"time: {e - s}")

    for i in range(len(x)):
        g = x[i].grad.cpu().numpy()
        if not np.any(g):
            warnings.warn(f"detect zero gradient at {i}-th input")
        if np.any(np.isnan(g)):
            warnings.warn(f"detect NaN-gradient at {i}-th input")
        if np.any(np.isinf(g)):
            warnings.warn(f"detect Inf-gradient at {i}-th input")
