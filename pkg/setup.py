import os
import re
import setuptools


def get_requirements(req_path: str):
    with open(req_path, encoding="utf-8") as f:
        return [line.strip() for line in f if line.strip() and not line.startswith("#")]

INSTALL_REQUIRES = get_requirements("requirements.txt")

def get_long_description():
    base_dir = os.path.abspath(os.path.dirname(__file__))
    with open(os.path.join(base_dir, "README.md"), encoding="utf-8") as f:
        return f.read()

def _init_field(name):
    current_dir = os.path.abspath(os.path.dirname(__file__))
    init_file = os.path.join(current_dir, 'src', 'cwsclique', '__init__.py')
    with open(init_file, encoding='utf-8') as f:
        return re.search(rf'^__{name}__ = [\'"]([^\'"]*)[\'"]', f.read(), re.M).group(1)


setuptools.setup(
    name='cwsclique',
    version=_init_field('version'),
    author=_init_field('author'),
    author_email='kijoongkwon@kaist.ac.kr',
    license=_init_field('license'),
    description="cwsclique: clique search and verification of codeword stabilized quantum codes",
    long_description=get_long_description(),
    long_description_content_type='text/markdown',
    install_requires=INSTALL_REQUIRES,
    extras_require={'test': ['pytest']},
    python_requires='>=3.10',
    packages=setuptools.find_packages(where='src', include=['cwsclique*']),
    package_dir={'': 'src'},
    package_data={
        'cwsclique.assets': [
            'config.json'
        ],
    },
    include_package_data=True,
    entry_points={
        'console_scripts': [
            'cwsclique=cwsclique.app.main:cli',
        ],
    },
)
