# -*- coding: utf-8 -*-
'''
Sphinx configuration for the SUnProp documentation
'''

import os
import sys
from datetime import datetime

try:
    docs_basepath = os.path.abspath(os.path.dirname(__file__))
except NameError:
    # sphinx-intl and six execute some code which will raise this NameError
    # assume we're in the doc/ directory
    docs_basepath = os.path.abspath(os.path.dirname('.'))

sys.path.insert(0, os.path.abspath(os.path.join(docs_basepath, os.pardir, os.pardir)))

import sunprop.version  # pylint: disable=wrong-import-position

# Heavy numerical libraries are not needed to render the API docs
autodoc_mock_imports = ['numpy', 'scipy', 'yaml', 'psutil']

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.viewcode',
]

source_suffix = '.rst'
source_encoding = 'utf-8-sig'
master_doc = 'index'

project = u'SUnProp'
copyright = u'{0}, The SUnProp Team'.format(datetime.utcnow().strftime('%Y'))
version = sunprop.version.__version__
release = version

exclude_patterns = []
add_function_parentheses = True
add_module_names = False
show_authors = False
pygments_style = 'sphinx'
modindex_common_prefix = ['sunprop.']

html_theme = 'alabaster'
html_short_title = 'SUnProp'
html_last_updated_fmt = '%b %d, %Y'
html_use_index = True
html_show_sourcelink = False
htmlhelp_basename = 'SUnPropDoc'

man_pages = [
    ('index', 'sunprop', u'SUnProp Documentation', [u'The SUnProp Team'], 1)
]

intersphinx_mapping = {
    'python3': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'scipy': ('https://docs.scipy.org/doc/scipy', None),
}
