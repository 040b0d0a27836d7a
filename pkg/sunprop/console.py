# -*- coding: utf-8 -*-
'''
    sunprop.console
    ~~~~~~~~~~~~~~~

    Console output helpers: rulers, coloured bullets and the terminal width.

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import sys
import shutil

DEFAULT_COLUMNS = 80

ANSI_COLORS = {
    'BLACK': '\033[0;30m',
    'DARK_GRAY': '\033[1;30m',
    'RED': '\033[0;31m',
    'LIGHT_RED': '\033[1;31m',
    'GREEN': '\033[0;32m',
    'LIGHT_GREEN': '\033[1;32m',
    'BROWN': '\033[0;33m',
    'YELLOW': '\033[1;33m',
    'BLUE': '\033[0;34m',
    'LIGHT_BLUE': '\033[1;34m',
    'PURPLE': '\033[0;35m',
    'CYAN': '\033[0;36m',
    'WHITE': '\033[1;37m',
    'DEFAULT_COLOR': '\033[00m',
    'ENDC': '\033[0m',
}


def get_colors(use=True):
    '''
    The ANSI colour table, or the same keys mapped to empty strings
    '''
    if use:
        return dict(ANSI_COLORS)
    return dict((name, '') for name in ANSI_COLORS)


def terminal_width(default=DEFAULT_COLUMNS):
    return shutil.get_terminal_size((default, 25)).columns


def print_header(header, sep='~', top=True, bottom=True, inline=False,
                 centered=False, width=DEFAULT_COLUMNS, stream=None):
    '''
    Print ``header`` with rulers above and below, or padded inline with
    ``sep``
    '''
    stream = stream or sys.stdout
    if top and not inline:
        stream.write(sep * width + '\n')

    if centered and not inline:
        fmt = '{0:^{width}}'
    elif inline and not centered:
        fmt = '{0:{sep}<{width}}'
    elif inline and centered:
        fmt = '{0:{sep}^{width}}'
    else:
        fmt = '{0}'
    stream.write(fmt.format(header, sep=sep, width=width) + '\n')

    if bottom and not inline:
        stream.write(sep * width + '\n')


def print_bulleted(colors, message, color='LIGHT_BLUE', stream=None):
    stream = stream or sys.stdout
    stream.write(' {0}*{ENDC} {1}\n'.format(colors[color], message, **colors))
    stream.flush()
