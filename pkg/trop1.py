import argparse
import logging
import os
import sys

from joblib import Parallel, delayed

from feeder.feeder import Feeder
from feeder.instance import corpus_names, corpus_path, parse_instance, parse_recession, serialize_instance
from models.curve import genus
from models.descent import DescentInstance, configuration_exists, descends, linear_parts
from models.moduli import (assemble_complex, enumerate_types, expected_dim, is_superabundant, moduli_cone,
                           radial_types, type_complex, well_spaced_subcomplex)
from models.tropmap import project
from models.wellspaced import check_character, induced_descent, is_well_spaced, m_plus_two_check
from utils import general
from utils.errors import DescentError, InconsistencyError, InstanceError, TropError
from visualization.face_poset import to_dot

logger = logging.getLogger('trop1')

EXIT_YES, EXIT_NO, EXIT_INVALID = 0, 1, 2


def _param(text):
    if '=' not in text:
        raise argparse.ArgumentTypeError('expected name=value, got %r' % text)
    name, value = text.split('=', 1)
    try:
        return name.strip(), general.parse_rational(value.strip())
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err))


def _vector(text):
    try:
        return tuple(general.parse_rational(x.strip()) for x in text.split(','))
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err))


def _parts(text):
    """'2:1,-1;2:2,-2' -> ((1, -1), (2, -2)); the size prefix is checked against the slope count."""
    parts = []
    for chunk in text.split(';'):
        size, _, slopes = chunk.partition(':')
        if not slopes:
            size, slopes = None, size
        a = tuple(int(x) for x in slopes.split(','))
        if size is not None and int(size) != len(a):
            raise argparse.ArgumentTypeError('part %r announces %s slopes' % (chunk, size))
        parts.append(a)
    return tuple(parts)


def _outputs(opt, command):
    """(output directory, complex JSON path); --out may name the directory or the JSON file itself."""
    if opt.out and opt.out.endswith('.json'):
        out, target = os.path.dirname(opt.out) or '.', opt.out
    else:
        out = opt.out if opt.out else general.check_runs(command)
        target = os.path.join(out, 'complex.json')
    if not os.path.exists(out): os.makedirs(out)
    general.write_config(out, __file__, {k: v for k, v in sorted(vars(opt).items()) if k != 'func'})
    return out, target


###############################################################################
# check
###############################################################################

def _superabundance(ctype):
    # a diagnostic only: a failed cross-check must not change the verdict or the exit code
    try:
        return is_superabundant(ctype)
    except InconsistencyError as err:
        logger.warning('superabundance left undecided: %s', err)
        return None


def check_instance(inst, chi=None):
    """Verdicts and report of one instance; raises TropError on unusable input."""
    fmap = inst.map
    if fmap is None:
        raise InstanceError('instance %s carries no map (edge lengths missing or genus 0)' % inst.name, field='map')
    if chi is not None:
        ok, flat = check_character(fmap, chi)
        flats = [flat]
    else:
        ok, full = is_well_spaced(fmap)
        flats = list(full.flats)
    report = {
        'instance': inst.name,
        'well_spaced': ok,
        'speyer': all(f.speyer for f in flats),
        'm_plus_two': m_plus_two_check(fmap),
        'superabundant': _superabundance(inst.ctype),
        'flats': [f.as_dict() for f in flats],
    }
    line = fmap if fmap.ambient_dim == 1 else (project(fmap, chi) if chi is not None else None)
    if line is not None:
        parts = induced_descent(line)
        if parts is not None:
            exists, witness = configuration_exists(parts)
            report['descent'] = {
                'parts': [list(p) for p in parts],
                'configuration_exists': exists,
                'witness': None if witness is None else [[general.format_rational(x) for x in p]
                                                         for p in witness.points],
            }
    return ok, report


def _check_one(path, params, chi):
    try:
        inst = parse_instance(path, params)
        ok, report = check_instance(inst, chi)
    except TropError as err:
        return os.path.basename(path), EXIT_INVALID, str(err)
    return inst.name, EXIT_YES if ok else EXIT_NO, report


def run_check(opt):
    params = dict(opt.param)
    if opt.batch:
        feeder = Feeder(opt.batch, params)
        results = Parallel(n_jobs=general.n_threads())(
            delayed(_check_one)(path, feeder._params_for(path), opt.chi) for path in feeder.paths)
        codes = []
        for name, code, detail in results:
            codes.append(code)
            if code == EXIT_INVALID:
                print('%s: invalid (%s)' % (name, detail))
            else:
                print('%s: %s' % (name, 'well-spaced' if code == EXIT_YES else 'not well-spaced'))
        if opt.report:
            general.save(opt.report, [d for _, c, d in results if c != EXIT_INVALID])
        if EXIT_INVALID in codes:
            return EXIT_INVALID
        return EXIT_NO if EXIT_NO in codes else EXIT_YES

    if not opt.instance:
        raise InstanceError('an instance file or --batch DIR is required')
    inst = parse_instance(opt.instance, params)
    ok, report = check_instance(inst, opt.chi)
    print('%s: %s' % (inst.name, 'well-spaced' if ok else 'not well-spaced'))
    if opt.speyer:
        print('speyer: %s' % ('yes' if report['speyer'] else 'no'))
    if 'descent' in report:
        print('descent configuration: %s' % ('exists' if report['descent']['configuration_exists'] else 'none'))
    if opt.report:
        general.save(opt.report, report)
    return EXIT_YES if ok else EXIT_NO


###############################################################################
# moduli / export
###############################################################################

def _complex(opt):
    if opt.recession:
        recession = parse_recession(opt.recession)
        types = enumerate_types(recession, opt.max_vertices)
        cells = []
        for i, t in enumerate(types):
            cells += radial_types(t, 'T%d' % (i + 1))
        return assemble_complex(cells)
    inst = parse_instance(opt.instance, dict(opt.param))
    if inst.ctype is None:
        raise InstanceError('instance %s carries no map section' % inst.name, field='map')
    return type_complex(inst.ctype, faces=opt.faces, name=inst.name)


def run_moduli(opt):
    if not opt.instance and not opt.recession:
        raise InstanceError('an instance file or --recession FILE is required')
    if opt.instance and not opt.recession:
        inst = parse_instance(opt.instance, dict(opt.param))
        if inst.ctype is not None:
            cone = moduli_cone(inst.ctype)
            print('%s: dim %d, expected %d' % (inst.name, cone.dim, expected_dim(inst.ctype)))
            if genus(inst.curve) == 1:
                flag = _superabundance(inst.ctype)
                print('superabundant: %s' % ('unknown' if flag is None else 'yes' if flag else 'no'))
    cx = _complex(opt)
    if opt.well_spaced:
        cx = well_spaced_subcomplex(cx, seed=opt.seed)
    _, target = _outputs(opt, 'moduli')
    general.save(target, cx.as_dict())
    stats = cx.stats()
    print('cells %d, arrows %d, maximal %d, pure %s' % (stats['cells'], stats['arrows'], stats['maximal'],
                                                          stats['pure']))
    return EXIT_YES


def run_export(opt):
    cx = _complex(opt)
    keep = None
    if opt.well_spaced:
        keep = {c.name for c in well_spaced_subcomplex(cx, seed=opt.seed).cells}
    out, target = _outputs(opt, 'export')
    general.save(target, cx.as_dict())
    with open(os.path.join(out, 'face_poset.dot'), 'w') as f:
        f.write(to_dot(cx, highlight=keep))
    print(out)
    return EXIT_YES


###############################################################################
# descent
###############################################################################

def run_descent(opt):
    if opt.search:
        if opt.parts is None:
            raise DescentError('--search needs --parts')
        exists, witness = configuration_exists(opt.parts, opt.c, seed=opt.seed)
        result = {'configuration_exists': exists}
        if witness is not None:
            result['points'] = [[general.format_rational(x) for x in p] for p in witness.points]
        sys.stdout.write(general.dumps(result))
        return EXIT_YES if exists else EXIT_NO

    if not opt.instance:
        raise DescentError('an instance file or --search is required')
    try:
        data = general.load(opt.instance)
        inst = DescentInstance(tuple(tuple(p) for p in data['slopes']),
                               tuple(tuple(general.parse_rational(x) for x in p) for p in data['points']),
                               tuple(general.parse_rational(x) for x in data['constants']))
    except (KeyError, TypeError, ValueError) as err:
        if isinstance(err, TropError):
            raise
        raise InstanceError('malformed descent instance: %s' % err) from err
    ok = descends(inst)
    result = {'b': [general.format_rational(b) for b in linear_parts(inst).b], 'descends': ok}
    sys.stdout.write(general.dumps(result))
    return EXIT_YES if ok else EXIT_NO


###############################################################################
# corpus
###############################################################################

def run_corpus(opt):
    if opt.write:
        if not os.path.exists(opt.write): os.makedirs(opt.write)
        for name in corpus_names():
            inst = parse_instance(corpus_path(name))
            general.save(os.path.join(opt.write, name + '.json'), serialize_instance(inst))
    for name in corpus_names():
        print(name)
    return EXIT_YES


def build_parser():
    parser = argparse.ArgumentParser(prog='trop1', description='Realizability of genus-1 tropical maps')
    parser.add_argument('-v', '--verbose', action='count', default=0, help="-v for info, -vv for debug logging")
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('check', help="well-spacedness verdict of an instance (exit 0 yes, 1 no, 2 invalid)")
    p.add_argument('instance', nargs='?', help="instance JSON file")
    p.add_argument('--param',  type=_param, action='append', default=[], help="override a length parameter, name=value")
    p.add_argument('--chi',    type=_vector, default=None, help="single character c1,...,cr")
    p.add_argument('--speyer', action='store_true', help="also report Speyer's condition")
    p.add_argument('--report', type=str, default=None, help="write the JSON report here")
    p.add_argument('--batch',  type=str, default=None, help="check every .json file of a directory")
    p.set_defaults(func=run_check)

    for name, func, text in (('moduli', run_moduli, "moduli cone and cone complex of a type or recession type"),
                             ('export', run_export, "complex JSON and DOT face poset")):
        p = sub.add_parser(name, help=text)
        p.add_argument('instance', nargs='?', help="instance JSON file")
        p.add_argument('--recession',    type=str, default=None, help="recession type file; enumerates its types")
        p.add_argument('--max-vertices', type=int, default=2, help="vertex bound for enumeration")
        p.add_argument('--faces',        action='store_true', help="include the edge contractions of the type")
        p.add_argument('--well-spaced',  action='store_true', help="restrict to the well-spaced subcomplex")
        p.add_argument('--param',        type=_param, action='append', default=[], help="name=value")
        p.add_argument('--seed',         type=int, default=0, help="seed for sample points")
        p.add_argument('--out',          type=str, default=None, help="output directory or complex .json path (default runs/<command>/expN)")
        p.set_defaults(func=func)

    p = sub.add_parser('descent', help="residue descent oracle")
    p.add_argument('--instance', type=str, default=None, help="descent instance JSON file")
    p.add_argument('--search',   action='store_true', help="search a configuration of points")
    p.add_argument('--parts',    type=_parts, default=None, help="branch slopes, e.g. '2:1,-1;2:2,-2'")
    p.add_argument('--c',        type=_vector, default=None, help="branch constants, e.g. '1,-8'")
    p.add_argument('--seed',     type=int, default=0, help="seed of the search")
    p.set_defaults(func=run_descent)

    p = sub.add_parser('corpus', help="list or write the bundled example instances")
    p.add_argument('--write', type=str, default=None, help="directory to write the corpus files to")
    p.set_defaults(func=run_corpus)
    return parser


def main(argv=None):
    parser = build_parser()
    opt = parser.parse_args(argv)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(opt.verbose, 2)]
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')
    logger.debug('options %s', opt)
    try:
        return opt.func(opt)
    except (TropError, OSError) as err:
        print('error: %s' % err, file=sys.stderr)
        return EXIT_INVALID


if __name__ == '__main__':
    sys.exit(main())
