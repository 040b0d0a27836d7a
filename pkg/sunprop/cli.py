# -*- coding: utf-8 -*-
'''
    sunprop.cli
    ~~~~~~~~~~~

    The ``sunprop`` command line tool.

    .. code-block:: bash

        sunprop run scenarios/weak-interaction.yaml --workers 4 -vv
        sunprop suite scenarios/ --out results

    Every scenario writes its artifacts (series, survival diagram, Q grids,
    summary and the resolved configuration) into ``<out>/<scenario name>``.

    :copyright: © 2026 by the SUnProp Team, see AUTHORS for more details.
    :license: Apache 2.0, see LICENSE for more details.
'''

# Import python libs
import os
import sys
import time
import logging
import argparse
import traceback

# Import 3rd-party libs
import numpy as np

# Import sunprop libs
import sunprop.log
from sunprop import coherent, config, dynamics, fock, ivr, observables, process
from sunprop.console import get_colors, print_bulleted, print_header, terminal_width
from sunprop.exceptions import SUnPropError
from sunprop.model import hamiltonian_for
from sunprop.version import __version__

log = logging.getLogger(__name__)

DEFAULT_OUT = 'results'
QUANTUM_APPROACHES = ('exact', 'reduced', 'semiclassical', 'semiclassical-su2')
B3_APPROACHES = ('exact', 'semiclassical', 'classical')
SPHERE_PEAK_RATIO = 0.1
MONOTONE_SLACK = 1e-6


# Store a reference to the original handler
__GLOBAL_EXCEPTION_HANDLER = sys.excepthook


def __global_logging_exception_handler(exc_type, exc_value, exc_traceback):
    '''
    Log every unhandled exception before the default hook prints it
    '''
    logging.getLogger(__name__).error(
        'An un-handled exception was caught by sunprop\'s global exception handler:\n'
        '{0}: {1}\n{2}'.format(
            exc_type.__name__,
            exc_value,
            ''.join(traceback.format_exception(exc_type, exc_value, exc_traceback)).strip()
        )
    )
    __GLOBAL_EXCEPTION_HANDLER(exc_type, exc_value, exc_traceback)


sys.excepthook = __global_logging_exception_handler


class VerbosityAction(argparse.Action):
    '''
    Counting ``-v``: ``-vv`` INFO, ``-vvv`` DEBUG, ``-vvvv`` TRACE and
    ``-vvvvv`` GARBAGE on the console
    '''

    def __init__(self, option_strings, dest, default=0, **kwargs):
        super(VerbosityAction, self).__init__(option_strings, dest, nargs=0, default=default, **kwargs)

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, (getattr(namespace, self.dest, None) or 0) + 1)


class ScenarioResult(object):
    '''
    Outcome of one scenario run
    '''

    def __init__(self, name, path, out_dir=None):
        self.name = name
        self.path = path
        self.out_dir = out_dir
        self.summary = {}
        self.failures = []
        self.error = None
        self.wall_time = 0.0

    def __repr__(self):
        return 'ScenarioResult({0!r}, passed={1})'.format(self.name, self.passed)

    @property
    def passed(self):
        return self.error is None and not self.failures


class SuiteReport(object):
    '''
    Scenario results of a suite plus the checks spanning several scenarios
    '''

    def __init__(self, results=(), failures=()):
        self.results = list(results)
        self.failures = list(failures)

    @property
    def passed(self):
        return not self.failures and all(result.passed for result in self.results)

    @property
    def exit_code(self):
        return 0 if self.passed else 1


# ----- Acceptance ---------------------------------------------------------------------------------------------->
def _initial_envelope(series, window):
    return observables.envelope_amplitude(series, series.times[0] + 0.5 * window, window)


def _check_envelope(label, series, spec, reference_spec, failures):
    window = spec['window']
    amplitude = observables.envelope_amplitude(series, spec['time'], window)
    if 'max_ratio' in spec:
        initial = _initial_envelope(series, window)
        if amplitude > spec['max_ratio'] * initial:
            failures.append('{0}: envelope {1:.4g} at t={2} exceeds {3} x initial {4:.4g}'.format(
                label, amplitude, spec['time'], spec['max_ratio'], initial))
    else:
        if reference_spec is not None:
            reference = observables.envelope_amplitude(series, reference_spec['time'], window)
            what = 'collapse'
        else:
            reference = _initial_envelope(series, window)
            what = 'initial'
        if amplitude < spec['min_ratio'] * reference:
            failures.append('{0}: revival envelope {1:.4g} at t={2} below {3} x {4} {5:.4g}'.format(
                label, amplitude, spec['time'], spec['min_ratio'], what, reference))


def _top_peaks(qgrid, count=2):
    return coherent.sphere_peaks(qgrid, min_ratio=SPHERE_PEAK_RATIO)[:count]


def _check_two_peaks(run, reference, spec, failures):
    k = int(np.argmin(np.abs(run.times - spec['time'])))
    points = run.config.outputs['qgrid_points']
    grid = coherent.SphereGrid(points, 2 * points)
    semiclassical = _top_peaks(coherent.q_function(run.states('semiclassical')[k], grid))
    psi = run.states(reference)[k]
    if psi.n != run.params.n:
        psi = fock.project_two_mode(psi)
    expected = _top_peaks(coherent.q_function(psi, grid))
    if len(semiclassical) < 2 or len(expected) < 2:
        failures.append('two_peaks: found {0} semiclassical and {1} {2} maxima at t={3:.4g}'.format(
            len(semiclassical), len(expected), reference, run.times[k]))
        return
    for theta, phi, _ in semiclassical:
        distance = min(coherent.angular_distance(theta, phi, other[0], other[1]) for other in expected)
        if distance > spec['tolerance']:
            failures.append('two_peaks: semiclassical maximum at (θ={0:.3f}, φ={1:.3f}) is {2:.3f} rad '
                            'from the {3} maxima'.format(theta, phi, distance, reference))


def check_acceptance(run, series):
    '''
    Evaluate the scenario's acceptance thresholds

    :param series: ``{(observable, approach): TimeSeries}``, completed on
                   demand
    :returns: list of failure messages
    '''
    acceptance = run.config.acceptance
    reference = acceptance.get('reference', 'exact')
    failures = []

    def szbar(approach):
        key = ('szbar', approach)
        if key not in series:
            series[key] = observables.series_szbar(approach, run)
        return series[key]

    def b3(approach):
        key = ('b3', approach)
        if key not in series:
            series[key] = observables.series_b3_occupation(approach, run)
        return series[key]

    if 'max_deviation' in acceptance:
        deviation = observables.compare(szbar('semiclassical'), szbar(reference), 'max')
        if deviation > acceptance['max_deviation']:
            failures.append('max_deviation: {0:.4g} > {1}'.format(deviation, acceptance['max_deviation']))
    if 'rms_ratio_to_classical' in acceptance:
        semiclassical = observables.compare(szbar('semiclassical'), szbar(reference), 'rms')
        classical = observables.compare(szbar('classical'), szbar(reference), 'rms')
        if semiclassical > acceptance['rms_ratio_to_classical'] * classical:
            failures.append('rms_ratio_to_classical: semiclassical rms {0:.4g} > {1} x classical rms {2:.4g}'.format(
                semiclassical, acceptance['rms_ratio_to_classical'], classical))
    if acceptance.get('no_filtered'):
        filtered = run.semiclassical().ensemble.counts()[ivr.FILTERED]
        if filtered:
            failures.append('no_filtered: {0} trajectories were filtered'.format(filtered))
    if 'b3_at_end' in acceptance:
        low, high = acceptance['b3_at_end']
        value = b3('exact').values[-1]
        if not low <= value <= high:
            failures.append('b3_at_end: {0:.4g} outside [{1}, {2}]'.format(value, low, high))
    if acceptance.get('b3_monotone'):
        steps = np.diff(b3('exact').values)
        if np.any(steps < -MONOTONE_SLACK):
            failures.append('b3_monotone: largest decrease {0:.3g}'.format(-steps.min()))
    for key in ('collapse', 'revival'):
        if key not in acceptance:
            continue
        collapse = acceptance.get('collapse') if key == 'revival' else None
        for approach in (reference, 'semiclassical'):
            _check_envelope('{0} ({1})'.format(key, approach), szbar(approach), acceptance[key], collapse, failures)
    if 'classical_envelope_spread' in acceptance:
        window = acceptance.get('collapse', {}).get('window', 1.0)
        samples = observables.envelope_samples(szbar('classical'), window)
        if not len(samples) or np.mean(samples) == 0:
            failures.append('classical_envelope_spread: no envelope within windows of {0}'.format(window))
        else:
            spread = float(np.std(samples) / np.mean(samples))
            if spread > acceptance['classical_envelope_spread']:
                failures.append('classical_envelope_spread: {0:.4g} > {1}'.format(
                    spread, acceptance['classical_envelope_spread']))
    if acceptance.get('su3_beats_su2'):
        su3 = observables.compare(szbar('semiclassical'), szbar('exact'), 'max')
        su2 = observables.compare(szbar('semiclassical-su2'), szbar('exact'), 'max')
        if not su3 < su2:
            failures.append('su3_beats_su2: SU(3) deviation {0:.4g} >= SU(2) deviation {1:.4g}'.format(su3, su2))
    if 'two_peaks' in acceptance:
        _check_two_peaks(run, reference, acceptance['two_peaks'], failures)
    return failures
# <---- Acceptance -----------------------------------------------------------------------------------------------


# ----- Scenario Runs ------------------------------------------------------------------------------------------->
def _q_grid(cfg):
    outputs = cfg.outputs
    if outputs['sphere']:
        return coherent.SphereGrid(outputs['qgrid_points'], 2 * outputs['qgrid_points'])
    return coherent.BoxGrid(cfg.initial, outputs['qgrid_half_width'], outputs['qgrid_points'])


def _write_q_grids(run, out_dir):
    cfg = run.config
    grid = _q_grid(cfg)
    for t in cfg.outputs['qgrid_times']:
        k = int(np.argmin(np.abs(run.times - t)))
        for approach in cfg.outputs['approaches']:
            if approach not in QUANTUM_APPROACHES:
                continue
            psi = run.states(approach)[k]
            if psi.n != cfg.params.n:
                if approach != 'exact':
                    continue
                psi = fock.project_two_mode(psi)
            qgrid = coherent.q_function(psi, grid)
            header, rows = qgrid.columns()
            if qgrid.kind == 'sphere':
                header = header + ['x', 'y', 'z']
                rows = np.column_stack([rows, coherent.sphere_embedding(qgrid)])
            fname = 'qgrid_t{0:.2f}_{1}.csv'.format(run.times[k], approach)
            observables.write_csv(os.path.join(out_dir, fname), header, rows)


def _principal_diagnostics(run, summary):
    principal = run.semiclassical().ensemble.principal
    if principal is None or principal.reached == 0:
        return
    model = hamiltonian_for(run.params)
    energy = dynamics.trajectory_energy(model, principal)
    scale = max(abs(energy[0]), 1.0)
    summary['principal_energy_drift'] = float(np.max(np.abs(energy - energy[0])) / scale)
    reached = slice(0, principal.reached)
    summary['principal_max_imag_action'] = float(np.max(np.abs(principal.action[reached].imag)))
    summary['principal_max_imag_correction'] = float(np.max(np.abs(principal.correction[reached].imag)))
    summary['principal_status'] = str(principal.status)


def _write_semiclassical(run, out_dir, summary):
    cfg = run.config
    sc = run.semiclassical()
    counts = sc.ensemble.counts()
    summary['trajectories'] = len(sc.ensemble)
    summary['grid_spacing'] = sc.grid.spacing
    for kind in (ivr.ALIVE, ivr.FILTERED, ivr.SINGULAR):
        summary['trajectories_{0}'.format(kind)] = counts[kind]
    summary['trajectories_contributing_at_end'] = int(sc.table.alive[-1])
    if cfg.outputs['survival']:
        header, rows = ivr.survival_diagram(sc.ensemble)
        observables.write_csv(os.path.join(out_dir, 'survival.csv'), header, rows)
    if cfg.outputs['integrals']:
        header, rows = sc.table.columns()
        observables.write_csv(os.path.join(out_dir, 'integrals.csv'), header, rows)
    for index, record in sorted(sc.ensemble.records.items()):
        if index == sc.grid.center_index and cfg.outputs['trajectory_dumps'] == 0:
            continue
        header, rows = record.dump_columns()
        observables.write_csv(os.path.join(out_dir, 'trajectory_{0:06d}.csv'.format(index)), header, rows)
    _principal_diagnostics(run, summary)


def _write_summary(result, path):
    with open(path, 'w') as wfh:
        wfh.write('scenario: {0}\n'.format(result.name))
        for key in sorted(result.summary):
            value = result.summary[key]
            if isinstance(value, float):
                value = '{0:.10g}'.format(value)
            wfh.write('{0}: {1}\n'.format(key, value))
        wfh.write('wall_time: {0:.3f}\n'.format(result.wall_time))
        wfh.write('acceptance: {0}\n'.format('passed' if result.passed else 'FAILED'))
        for failure in result.failures:
            wfh.write('  - {0}\n'.format(failure))
        if result.error:
            wfh.write('error: {0}\n'.format(result.error))


def run_scenario(path, out=DEFAULT_OUT, workers=1, tol=None, grid_points=None, half_width=None):
    '''
    Run the scenario file at ``path`` and write its artifacts

    Library errors are caught and recorded on the result; they never
    escape.

    :returns: :class:`ScenarioResult`
    '''
    name = os.path.splitext(os.path.basename(path))[0]
    result = ScenarioResult(name, path)
    start = time.time()
    try:
        cfg = config.load_scenario(path)
        cfg.override(tol=tol, grid_points=grid_points, half_width=half_width)
        result.name = cfg.name
        result.out_dir = os.path.join(out, cfg.name)
        if not os.path.isdir(result.out_dir):
            os.makedirs(result.out_dir)
        config.dump_scenario(cfg, os.path.join(result.out_dir, 'config.yaml'))
        log.info('Running scenario {0} into {1}'.format(cfg.name, result.out_dir))

        run = observables.ScenarioRun(cfg, workers=workers)
        summary = result.summary
        summary['model'] = repr(cfg.params)
        summary['filter_rate'] = cfg.filter.rate
        series = {}
        approaches = cfg.outputs['approaches']
        for approach in approaches:
            if cfg.outputs['szbar']:
                series[('szbar', approach)] = observables.series_szbar(approach, run)
                series[('szbar', approach)].to_csv(
                    os.path.join(result.out_dir, 'szbar_{0}.csv'.format(approach)))
            if cfg.outputs['b3'] and approach in B3_APPROACHES:
                series[('b3', approach)] = observables.series_b3_occupation(approach, run)
                series[('b3', approach)].to_csv(
                    os.path.join(result.out_dir, 'b3_{0}.csv'.format(approach)))

        if 'semiclassical' in approaches:
            _write_semiclassical(run, result.out_dir, summary)
        if cfg.outputs['qgrid_times']:
            _write_q_grids(run, result.out_dir)

        references = sorted(set(['exact', cfg.acceptance.get('reference', 'exact')]))
        for (observable, approach), values in sorted(series.items()):
            for reference in references:
                if approach == reference or (observable, reference) not in series:
                    continue
                for metric in ('max', 'rms'):
                    summary['{0}_{1}_vs_{2}_{3}'.format(observable, approach, reference, metric)] = \
                        observables.compare(values, series[(observable, reference)], metric)
        if ('szbar', 'semiclassical') in series and ('szbar', 'classical') in series:
            summary['l2_to_classical'] = observables.compare(
                series[('szbar', 'semiclassical')], series[('szbar', 'classical')], 'l2')

        result.failures = check_acceptance(run, series)
        summary['memory_mb'] = process.resident_memory_mb()
    except SUnPropError as exc:
        log.error('Scenario {0} failed: {1}'.format(name, exc))
        result.error = str(exc)
    result.wall_time = time.time() - start
    if result.out_dir is not None and os.path.isdir(result.out_dir):
        _write_summary(result, os.path.join(result.out_dir, 'summary.txt'))
    return result


def _scaling_key(cfg):
    return (cfg.params.n, cfg.params.omega, cfg.params.chi, tuple(cfg.initial),
            cfg.time['horizon'], cfg.time['samples'])


def check_n_scaling(results, configs):
    '''
    Within every family of scenarios differing only in ``N``, the L2 distance
    between the semiclassical and classical ``<S_z>/S`` must decrease with
    ``N``
    '''
    families = {}
    for result, cfg in zip(results, configs):
        if cfg is None or 'l2_to_classical' not in result.summary:
            continue
        families.setdefault(_scaling_key(cfg), []).append((cfg.params.N, result))
    failures = []
    for members in families.values():
        members.sort(key=lambda member: member[0])
        if len(set(N for N, _ in members)) < 2:
            continue
        distances = [result.summary['l2_to_classical'] for _, result in members]
        log.info('N-scaling: {0}'.format(
            ', '.join('N={0}: {1:.4g}'.format(N, d) for (N, _), d in zip(members, distances))))
        if any(later >= earlier for earlier, later in zip(distances, distances[1:])):
            failures.append('N-scaling: L2 distance to classical does not decrease with N ({0})'.format(
                ', '.join('{0}={1:.4g}'.format(result.name, d) for (_, result), d in zip(members, distances))))
    return failures


def run_suite(paths, out=DEFAULT_OUT, **kwargs):
    '''
    Run every scenario in ``paths`` one after the other. A failing scenario
    does not stop the others.

    :returns: :class:`SuiteReport`
    '''
    results, configs = [], []
    for path in paths:
        results.append(run_scenario(path, out=out, **kwargs))
        try:
            configs.append(config.load_scenario(path))
        except SUnPropError:
            configs.append(None)
    return SuiteReport(results, check_n_scaling(results, configs))
# <---- Scenario Runs --------------------------------------------------------------------------------------------


class SUnPropParser(argparse.ArgumentParser):

    def __init__(self, *args, **kwargs):
        kwargs.setdefault('prog', 'sunprop')
        kwargs.setdefault('description', 'Semiclassical SU(n) propagation of triple-well condensates')
        super(SUnPropParser, self).__init__(*args, **kwargs)
        self.options = None
        self.colors = get_colors(False)
        self.add_argument('--version', action='version', version='%(prog)s {0}'.format(__version__))

        common = argparse.ArgumentParser(add_help=False)
        execution = common.add_argument_group('Execution Options')
        execution.add_argument(
            '--workers',
            type=int,
            default=None,
            help='Number of worker processes. Default: the number of physical cores'
        )
        execution.add_argument(
            '--tol',
            type=float,
            default=None,
            help='Override the relative integrator tolerance'
        )
        execution.add_argument(
            '--grid-points',
            type=int,
            default=None,
            help='Override the points per axis of the initial condition grids (odd)'
        )
        execution.add_argument(
            '--half-width',
            type=float,
            default=None,
            help='Override the half width of the initial condition grids'
        )
        output = common.add_argument_group('Output Options')
        output.add_argument(
            '--out',
            default=DEFAULT_OUT,
            help='Artifact directory. Default: %(default)s'
        )
        output.add_argument(
            '-v',
            '--verbose',
            dest='verbosity',
            action=VerbosityAction,
            help='Console logging verbosity, repeat for more'
        )
        output.add_argument(
            '--log-file',
            default=None,
            help='Log everything down to DEBUG into this file'
        )
        output.add_argument(
            '--output-columns',
            type=int,
            default=None,
            help='Number of maximum columns to use on the output'
        )
        output.add_argument(
            '--no-colors',
            '--no-colours',
            default=False,
            action='store_true',
            help='Disable colour printing'
        )
        output.add_argument(
            '--no-report',
            default=False,
            action='store_true',
            help='Do NOT show the overall scenarios report'
        )

        subparsers = self.add_subparsers(dest='command', metavar='COMMAND', parser_class=argparse.ArgumentParser)
        subparsers.required = True
        run = subparsers.add_parser('run', parents=[common], help='Run one scenario file')
        run.add_argument('config', help='Scenario file')
        suite = subparsers.add_parser('suite', parents=[common], help='Run every scenario of a directory')
        suite.add_argument('directory', help='Directory of scenario files')

    def parse_args(self, args=None, namespace=None):
        options = super(SUnPropParser, self).parse_args(args, namespace)
        if options.workers is not None and options.workers < 1:
            self.error('--workers must be at least 1')
        if options.workers is None:
            options.workers = process.default_workers()
        if options.output_columns is None:
            options.output_columns = terminal_width()
        self.options = options
        self.colors = get_colors(options.no_colors is False)
        self._setup_logging()
        return options

    def _setup_logging(self):
        handlers = []
        if self.options.log_file:
            handlers.append(sunprop.log.setup_logfile_logging(self.options.log_file))
            print_bulleted(self.colors, 'Logging to {0}'.format(self.options.log_file))
        console = sunprop.log.setup_console_logging(self.options.verbosity or 0)
        if console is not None:
            handlers.append(console)
        sunprop.log.remove_temporary_handler(handlers)
        log.debug('Logging has been setup')

    def print_overall_report(self, report):
        width = self.options.output_columns
        print()
        print_header('  Overall Scenarios Report  ', sep='=', centered=True, inline=True, width=width)
        no_problems_found = True
        for result in report.results:
            if result.passed:
                continue
            no_problems_found = False
            print_header('*** {0}  '.format(result.name), sep='*', inline=True, width=width)
            if result.error:
                print('   -> error: {0}'.format(result.error))
            for failure in result.failures:
                print('   -> {0}'.format(failure))
        if report.failures:
            no_problems_found = False
            print_header('*** Suite checks  ', sep='*', inline=True, width=width)
            for failure in report.failures:
                print('   -> {0}'.format(failure))
        if no_problems_found:
            print_header('***  No Problems Found While Running Scenarios  ', sep='*', inline=True, width=width)
        print_header('', sep='=', inline=True, width=width)
        total = len(report.results)
        errors = len([result for result in report.results if result.error])
        failed = len([result for result in report.results if result.failures and not result.error])
        print('{0} (total={1}, passed={2}, failed={3}, errors={4}, suite_failures={5})'.format(
            'OK' if report.passed else 'FAILED', total, total - errors - failed, failed, errors,
            len(report.failures)
        ))
        print_header('  Overall Scenarios Report  ', sep='=', centered=True, inline=True, width=width)

    def finalize(self, report):
        '''
        Show the report, terminate stray worker processes and exit
        '''
        if self.options.no_report is False:
            self.print_overall_report(report)
        process.terminate_children()
        log.info('Finalized with exit code: {0}'.format(report.exit_code))
        self.exit(report.exit_code)


def main(argv=None):
    sunprop.log.install_temporary_handler()
    parser = SUnPropParser()
    options = parser.parse_args(argv)
    kwargs = dict(out=options.out, workers=options.workers, tol=options.tol,
                  grid_points=options.grid_points, half_width=options.half_width)
    if options.command == 'run':
        print_header('Scenario {0}'.format(options.config), width=options.output_columns)
        report = SuiteReport([run_scenario(options.config, **kwargs)])
    else:
        try:
            paths = config.discover_scenarios(options.directory)
        except OSError as exc:
            print_bulleted(parser.colors, 'Cannot list {0}: {1}'.format(options.directory, exc), 'RED')
            parser.exit(1)
        print_header('Suite of {0} scenario(s) in {1}'.format(len(paths), options.directory),
                     width=options.output_columns)
        report = run_suite(paths, **kwargs)
    for result in report.results:
        if result.passed:
            print_bulleted(parser.colors, '{0}: OK ({1:.1f}s)'.format(result.name, result.wall_time), 'LIGHT_GREEN')
        else:
            print_bulleted(parser.colors, '{0}: {1}'.format(
                result.name, result.error or '{0} acceptance failure(s)'.format(len(result.failures))), 'RED')
    parser.finalize(report)


if __name__ == '__main__':
    main()
