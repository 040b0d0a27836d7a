# -*- coding: utf-8 -*-
'''
    sunprop.version
    ~~~~~~~~~~~~~~~

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

__version_info__ = (2026, 10, 18)
__version__ = '{0}.{1}.{2}'.format(*__version_info__)
