"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from .core.errors import PTABaseException
from .core.pta_encoder import PTAEncoder
from .core.pta_logger import PTALogger
from .core import pta_configuration
import argparse
import json
import sys


def init_logger():
    return PTALogger.init_logger("pytxalloc")


def common_parser():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--case', metavar='CASE', help='Case file (JSON)', default=None, dest="case")
    parser.add_argument('--scenarios', metavar='TREE', help='Scenario tree file (JSON)', default=None,
                        dest="scenarios")
    parser.add_argument('--out', metavar='DIR', help='Output directory', default=".", dest="out")
    parser.add_argument('--gap', metavar='GAP', type=float, help='Relative MIP gap', default=None, dest="gap")
    parser.add_argument('--time-limit', metavar='SECONDS', type=float, help='Solver time limit', default=None,
                        dest="time_limit")
    parser.add_argument('--days', metavar='K', type=int, help='Representative days', default=None, dest="days")
    parser.add_argument('--seed', metavar='SEED', type=int, help='Clustering seed', default=None, dest="seed")
    parser.add_argument('--discount-rate', metavar='RATE', type=float, help='Annual discount rate', default=None,
                        dest="discount_rate")
    parser.add_argument('--period-years', metavar='YEARS', type=int, help='Years per stage', default=None,
                        dest="period_years")
    parser.add_argument('--backend', metavar='NAME', help='Solver backend', default=None, dest="backend")
    parser.add_argument('--built-tol', metavar='MW', type=float, help='Build detection tolerance', default=None,
                        dest="built_tol")
    parser.add_argument('--binary-tol', metavar='TOL', type=float, help='Integrality tolerance', default=None,
                        dest="binary_tol")
    parser.add_argument('--rps-soft-price', metavar='PRICE', type=float,
                        help='Price renewable shortfall instead of enforcing the RPS', default=None,
                        dest="rps_soft_price")
    parser.add_argument('--at-most-one', action='store_true', help='At most one increment per line and node',
                        default=False, dest="at_most_one")
    parser.add_argument('--presolve', action='store_true', help='Run MILP presolve (incumbent still checked)',
                        default=False, dest="presolve")
    parser.add_argument('--multistage', action='store_true', help='Accept trees that branch after depth 2',
                        default=False, dest="multistage")
    parser.add_argument('--plan', metavar='FILE', help='Plan file written by the plan command', default=None,
                        dest="plan")
    parser.add_argument('--no-logo', action='store_true', help='Disable logo printing at startup', dest='nologo',
                        default=False)
    return parser


def counterfactual_parser():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--option', metavar='N', type=int, help='Counterfactual option 1, 2 or 3', default=None,
                        dest="option")
    parser.add_argument('--scope', metavar='SCOPE', help='portfolio, project:<line>, projects or all',
                        default=None, dest="scope")
    parser.add_argument('--all-years', action='store_true', help='Option 3 removes the lines at every node',
                        default=False, dest="all_years")
    return parser


def build_parser():
    parser = argparse.ArgumentParser(description='PyTxAlloc transmission expansion planning and beneficiaries-pay '
                                                 'cost allocation', formatter_class=argparse.RawTextHelpFormatter)
    sub = parser.add_subparsers(dest="command")
    sub.required = True
    common, cf = common_parser(), counterfactual_parser()
    sub.add_parser('validate', parents=[common], help='Validate a case and scenario tree')
    sub.add_parser('cluster', parents=[common], help='Select representative days')
    plan = sub.add_parser('plan', parents=[common], help='Solve the expansion model')
    plan.add_argument('--export-lp', metavar='FILE', help='Also write the model in LP format', default=None,
                      dest="export_lp")
    sub.add_parser('prices', parents=[common], help='Prices and optimality checks of the fixed-line model')
    sub.add_parser('counterfactual', parents=[common, cf], help='Solve counterfactual models')
    sub.add_parser('benefits', parents=[common, cf], help='Participant benefits against a counterfactual')
    allocate = sub.add_parser('allocate', parents=[common, cf], help='Beneficiaries-pay cost allocation')
    allocate.add_argument('--policy', metavar='POLICY', help='load-only or load+gen', default=None, dest="policy")
    allocate.add_argument('--compensate-losers', action='store_true', help='Pay losers their loss',
                          default=False, dest="compensate_losers")
    allocate.add_argument('--benefits', metavar='FILE', help='Allocate from a benefit vector file', default=None,
                          dest="benefits")
    sweep = sub.add_parser('sweep', parents=[common], help='Out-of-sample evaluation over the uncertainty grid')
    sweep.add_argument('--counter-plan', metavar='FILE', help='Counterfactual plan file', default=None,
                       dest="counter_plan")
    sweep.add_argument('--scope', metavar='SCOPE', help='Counterfactual entry to read', default=None, dest="scope")
    sweep.add_argument('--policy', metavar='POLICY', help='load-only or load+gen', default=None, dest="policy")
    sweep.add_argument('--grid', metavar='DIMS', help='Comma separated grid dimensions', default=None,
                       dest="grid")
    sweep.add_argument('--workers', metavar='N', type=int, help='Worker processes', default=None, dest="workers")
    sweep.add_argument('--bins', metavar='N', type=int, help='Histogram bins', default=None,
                       dest="histogram_bins")
    sweep.add_argument('--frozen-fleet', action='store_true', help='No generation recourse', default=False,
                       dest="frozen_fleet")
    sweep.add_argument('--add', metavar='LINE:INC', action='append',
                       type=pta_configuration.PTAConfiguration.valid_expansion,
                       help='Later expansion in service for both plans', default=None, dest="add")
    sweep.add_argument('--representative', action='store_true',
                       help='Evaluate over the representative days instead of every hour', default=False,
                       dest="representative")
    sweep.add_argument('--ex-ante', metavar='FILE', help='allocation.json to compare against', default=None,
                       dest="ex_ante")
    sub.add_parser('fixtures', parents=[common], help='Write published benefit vectors')
    sub.add_parser('report', parents=[common], help='Summarize the artifacts of an output directory')
    return parser


def run(argv=None):
    """
    Returns the exit code
    """
    logger = init_logger()
    logger.debug("{0} - PyTxAlloc successfully initialized".format(PTALogger.stamp()))
    args = build_parser().parse_args(argv)
    try:
        summary = pta_configuration.PTAConfiguration(args).start()
    except PTABaseException as e:
        logger.error("{0} - {1}".format(PTALogger.stamp(), e))
        sys.stderr.write(json.dumps(e.as_record(), sort_keys=True) + "\n")
        return e.exit_code
    sys.stdout.write(PTAEncoder.dumps(summary))
    logger.debug("{0} - PyTxAlloc successfully completed".format(PTALogger.stamp()))
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
