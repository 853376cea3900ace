from setuptools import Extension, setup


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:  # pure-Python install; spectral_cat._backend falls back
        return []
    return cythonize(
        [
            Extension(
                "spectral_cat._newton",
                ["src/spectral_cat/_newton.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )


try:
    ext_modules = _extensions()
except Exception as exc:  # Cython present but unusable: ship the fallback only
    print(f"warning: skipping compiled kernel ({exc})")
    ext_modules = []

setup(ext_modules=ext_modules)
