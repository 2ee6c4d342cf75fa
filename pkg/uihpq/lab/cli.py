import argparse
import sys

from ..boltzmann import as_fraction
from ..exceptions import UIHPQError
from .experiments import COMMANDS, ExperimentConfig
from .utils import log_versions, open_log, print_log, time_string, write_report


def build_parser():
    common = argparse.ArgumentParser(add_help=False, formatter_class=argparse.ArgumentDefaultsHelpFormatter)

    # Model
    common.add_argument('--p', type=as_fraction, default='1/4',
                        help='Skewness parameter in [0, 1/2], e.g. 1/4 or 0.3')
    common.add_argument('--n', type=int, nargs='+', default=[50, 200, 800],
                        help='Numbers of inner faces')
    common.add_argument('--sigma', type=int, nargs='+', default=[4, 16, 64],
                        help='Boundary half-lengths')
    common.add_argument('--radius', type=int, nargs='+', default=[1],
                        help='Ball radii')

    # Experiment
    common.add_argument('--samples', type=int, default=10000)
    common.add_argument('--tolerance', type=float, default=0.1,
                        help='TV threshold of the final grid point')
    common.add_argument('--device', type=str, default='cpu',
                        help='Torch device of the batched simulations')
    common.add_argument('--no_check_doubling', dest='check_doubling', action='store_false',
                        help='Skip recomputing balls in a doubled window')

    # Output
    common.add_argument('--out', type=str, default='results',
                        help='Folder for reports, logs and samples')
    common.add_argument('--format', type=str, default='json', choices=['json', 'csv'])

    # Random seed
    common.add_argument('--seed', type=int, default=0, help='64-bit seed')

    parser = argparse.ArgumentParser(prog='uihpq', description='Random quadrangulations with a boundary',
                                     formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    def add(name, help):
        return sub.add_parser(name, parents=[common], help=help,
                              formatter_class=argparse.ArgumentDefaultsHelpFormatter)

    verify = add('verify', 'exhaustive and exact checks')
    verify.add_argument('--psi_samples', type=int, default=10000,
                        help='Boltzmann samples for the decomposition round trips')
    verify.add_argument('--psi_p', type=as_fraction, default='3/10')
    verify.add_argument('--psi_sigma', type=int, default=4)

    add('local-conv', 'TV of balls of uniform quadrangulations against UIHPQ_p')

    boltzmann = add('boltzmann-conv', 'TV of balls of Boltzmann quadrangulations against UIHPQ_p')
    boltzmann.add_argument('--max_attempts', type=int, default=10000)
    boltzmann.set_defaults(p=as_fraction('3/10'))

    branching = add('branching-equiv', 'TV of balls of the branching and BDG constructions')
    branching.set_defaults(tolerance=0.05)

    rw = add('rw', 'random walk returns and Nash-Williams cutsets')
    rw.add_argument('--walk_length', type=int, default=100000)
    rw.add_argument('--walkers', type=int, default=1, help='Walks per sampled ball')
    rw.add_argument('--cutsets', type=int, default=10000)
    rw.add_argument('--return_threshold', type=float, default=0.95)
    rw.set_defaults(radius=[30], samples=200)

    percolation = add('percolation', 'containment of the root cluster')
    percolation.add_argument('--mode', type=str, default='site', choices=['site', 'bond', 'face'])
    percolation.add_argument('--p_perc', type=float, nargs='+', default=[0.9])
    percolation.add_argument('--contain_threshold', type=float, default=0.9)
    percolation.set_defaults(radius=[10, 20, 40], samples=1000)

    scaling = add('scaling', 'contour and label scaling of p-forests')
    scaling.add_argument('--one_minus_2p', type=float, default=0.1)
    scaling.add_argument('--a2', type=float, nargs='+', default=[1000.])
    scaling.add_argument('--K', type=float, default=1.)
    scaling.add_argument('--delta', type=float, default=0.5)
    scaling.add_argument('--label_trials', type=int, default=50)
    scaling.set_defaults(samples=500)

    prefix = add('prefix-law', 'exact TV lower bound between forest prefixes')
    prefix.add_argument('--k', type=int, default=1)
    prefix.add_argument('--cap', type=int, default=64, help='Tree size cap of the enumeration')
    prefix.set_defaults(p=as_fraction('1/3'), n=[4, 8, 16])

    sample = add('sample', 'write sampled maps as .pmap files')
    sample.add_argument('--kind', type=str, default='uihpq', choices=['uihpq', 'boltzmann', 'simple', 'branching'])
    sample.set_defaults(samples=10)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    log = open_log(args.out, args.seed)
    print_log('{} running {}'.format(time_string(), command), log)
    try:
        cfg = ExperimentConfig.from_args(args)
        log_versions(log, cfg)
        report = COMMANDS[command](cfg, log)
    except (UIHPQError, ValueError) as e:
        print_log('{} {} failed: {}'.format(time_string(), command, e), log)
        log[0].close()
        return 2
    path = write_report(report, cfg.out, cfg.format)
    failed = [c['name'] for c in report['checks'] if not c['passed']]
    for name in failed:
        print_log('check failed: {}'.format(name), log)
    print_log('{} report written to {} (passed {})'.format(time_string(), path, report['passed']), log)
    log[0].close()
    return 0 if report['passed'] else 1


if __name__ == '__main__':
    sys.exit(main())
