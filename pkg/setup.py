import setuptools

with open("README.md", "r", encoding="utf8") as fh:
    long_description = fh.read()

def _get_version():
    with open('pfstore/__init__.py') as f:
        for line in f:
            if line.startswith('__version__'):
                g = {}
                exec(line, g)
                return g['__version__']
        raise ValueError('`__version__` not defined')

VERSION = _get_version()

setuptools.setup(
    name="pfstore",
    version=VERSION,
    description="Private file storage over L servers with one-time pads and ramp secret sharing",
    long_description=long_description,
    long_description_content_type="text/markdown",
    keywords=["secret sharing", "one-time pad", "distributed storage", "information theory"],
    packages=setuptools.find_packages(exclude=('tests', 'tests.*')),
    install_requires=[
        'numpy>=1.16.3',
        'termcolor',
        'click>=8.0',
    ],
    entry_points={
        'console_scripts': ['pfstore = pfstore.cli:main'],
    },
    python_requires='>=3.8',
    classifiers=[
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.8",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
)
