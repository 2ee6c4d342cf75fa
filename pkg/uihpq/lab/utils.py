import json
import os
import sys
import time

import numpy as np
import pandas as pd
import torch


def time_string():
    ISOTIMEFORMAT = '%Y-%m-%d %X'
    string = '[{}]'.format(time.strftime(ISOTIMEFORMAT, time.gmtime(time.time())))
    return string


def convert_secs2time(epoch_time):
    need_hour = int(epoch_time / 3600)
    need_mins = int((epoch_time - 3600 * need_hour) / 60)
    need_secs = int(epoch_time - 3600 * need_hour - 60 * need_mins)
    return need_hour, need_mins, need_secs


def print_log(print_string, log, force=False):
    if log is None:
        return
    if log[1] == 0 or force:
        print("{}".format(print_string))
        if log[0] is not None:
            log[0].write('{}\n'.format(print_string))
            log[0].flush()


def open_log(out, seed):
    r"""
    Log handle (file, rank) writing to <out>/log_seed_<seed>.txt.
    """
    if not os.path.isdir(out):
        os.makedirs(out)
    log = open(os.path.join(out, 'log_seed_{}.txt'.format(seed)), 'w')
    return (log, 0)


def log_versions(log, args=None):
    print_log("Python version : {}".format(sys.version.replace('\n', ' ')), log)
    print_log("NumPy  version : {}".format(np.__version__), log)
    print_log("PyTorch  version : {}".format(torch.__version__), log)
    if args is not None:
        print_log(str(args), log)


class AverageMeter(object):
    """Computes and stores the average, the spread and the current value"""
    def __init__(self):
        self.reset()

    def reset(self):
        self.val = 0
        self.avg = 0
        self.sum = 0
        self.sumsq = 0
        self.count = 0

    def update(self, val, n=1):
        self.val = val
        self.sum += val * n
        self.sumsq += val * val * n
        self.count += n
        self.avg = self.sum / self.count

    @property
    def std(self):
        if self.count < 2:
            return 0.
        var = (self.sumsq - self.count * self.avg ** 2) / (self.count - 1)
        return float(np.sqrt(max(var, 0.)))

    @property
    def radius(self):
        r"""
        Three standard errors of the mean.
        """
        if self.count == 0:
            return float('inf')
        return 3 * self.std / np.sqrt(self.count)

    def summary(self):
        return {'mean': float(self.avg), 'radius': float(self.radius), 'count': int(self.count)}


REPORT_SCHEMA = 1


def make_report(experiment, params, results, checks):
    return {'schema': REPORT_SCHEMA, 'experiment': experiment, 'params': params,
            'results': results, 'checks': checks,
            'passed': all(c['passed'] for c in checks)}


def write_report(report, out, fmt='json'):
    r"""
    Write <out>/<experiment>.<fmt>; CSV holds the result rows only.
    """
    if not os.path.isdir(out):
        os.makedirs(out)
    path = os.path.join(out, '{}.{}'.format(report['experiment'], fmt))
    if fmt == 'json':
        with open(path, 'w') as f:
            f.write(json.dumps(report, sort_keys=True, indent=1) + '\n')
    elif fmt == 'csv':
        pd.DataFrame(report['results']).to_csv(path, index=False)
    else:
        raise ValueError("Invalid format: {}".format(fmt))
    return path
