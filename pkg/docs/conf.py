# -*- coding: utf-8 -*-
#
# sdlab documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.viewcode',
    'sphinx.ext.napoleon',
    'sphinx.ext.mathjax',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'sdlab'
copyright = u'2026, sdlab contributors'

# The short X.Y version and the full version, including alpha/beta/rc tags.
exec(open('../sdlab/version.py').read())
version = __version__
release = __version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# numpy-heavy signatures read better without the module prefix
add_module_names = False
autodoc_member_order = 'bysource'
napoleon_google_docstring = True

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
}

html_theme = 'default'
html_static_path = []
htmlhelp_basename = 'sdlabdoc'

latex_documents = [
    ('index', 'sdlab.tex', u'sdlab Documentation', u'sdlab contributors', 'manual'),
]

man_pages = [
    ('index', 'sdlab', u'sdlab Documentation', [u'sdlab contributors'], 1),
]

on_rtd = os.environ.get('READTHEDOCS', None) == 'True'

if not on_rtd:  # only import and set the theme if we're building docs locally
    import sphinx_rtd_theme
    html_theme = 'sphinx_rtd_theme'
    html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
