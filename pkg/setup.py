# Copyright 2022 The Freqplan Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import setuptools

try:
  with open("README.md", "r", encoding="utf-8") as fh:
    README = fh.read()
except IOError:
  README = ""


__version__ = None

with open('freqplan/version.py') as f:
  exec(f.read(), globals())


with open("requirements.txt") as f:
  INSTALL_REQUIRES = [line.strip() for line in f if line.strip() and not line.startswith("#")]


setuptools.setup(
    name="freqplan",
    version=__version__,
    author="The Freqplan Authors",
    description="Power-minimal frequency plans for multibeam NGSO constellations serving fixed "
                "and mobile users, with proactive and reactive strategies against uncertainty.",
    long_description=README,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["test", "test.*"]),
    package_data={
        "freqplan.linkbudget": ["dvbs2.csv"],
        "freqplan.scenario": ["airports.csv", "ports.csv"],
    },
    install_requires=INSTALL_REQUIRES,
    entry_points={"console_scripts": ["freqplan=freqplan.cli:main"]},
    classifiers=[
        "Development Status :: 2 - Pre-Alpha",
        "Programming Language :: Python :: 3.8",
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Topic :: Scientific/Engineering",
    ],
    python_requires='>=3.8',
)
