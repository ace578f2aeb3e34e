import json
import os, re
from fractions import Fraction

from utils.errors import InstanceError


def humanSort(text):  # Sort function for strings w/ numbers
    convText = lambda seq: int(seq) if seq.isdigit() else seq.lower()
    arrayKey = lambda key: [convText(s) for s in re.split('([0-9]+)', str(key))]  # Split numbers and chars, base function for sorted
    return sorted(text, key=arrayKey)


def check_runs(method, id=None):
    exps_path = os.path.join('runs', method)
    if not os.path.exists(exps_path): os.makedirs(exps_path)

    exps = [exp for exp in humanSort(os.listdir(exps_path)) if 'exp' in exp]
    if id is None:
        out = os.path.join(exps_path, 'exp'+str(len(exps)+1))
        os.makedirs(out)
        return out
    return os.path.join(exps_path, exps[id])


def write_config(out, script, opt):
    with open(os.path.join(out, 'config.txt'), 'w') as config_file:
        config_file.write(str(os.path.basename(script)) + '|' + str(opt))


def n_threads():
    # TROP1_THREADS caps batch parallelism
    cap = os.environ.get('TROP1_THREADS')
    if cap is None or cap.strip() == '':
        return os.cpu_count() or 1
    try:
        return max(1, int(cap))
    except ValueError:
        raise InstanceError('TROP1_THREADS must be an integer, got %r' % cap, field='TROP1_THREADS') from None


def format_rational(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else '%d/%d' % (q.numerator, q.denominator)


def parse_rational(text):
    if isinstance(text, bool):
        raise ValueError('not a rational: %r' % (text,))
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not re.fullmatch(r'\s*[-+]?\d+(\s*/\s*\d+)?\s*', text):
        raise ValueError('not a rational "p/q" string: %r' % (text,))
    return Fraction(text.replace(' ', ''))


def dumps(data):
    # Byte-stable JSON for reports and exports
    return json.dumps(data, indent=2, sort_keys=True) + '\n'


def save(path, data):
    with open(path, 'w') as f:
        f.write(dumps(data))


def load(path):
    with open(path) as f:
        return json.load(f)
