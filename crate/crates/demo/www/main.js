import init, { solve, regular, lift } from './pkg/mahler_demo.js';

const presets = {
  cantor3: { name: 'cantor3', q: 2, m: 3,
    A: [[['1'], ['0'], ['0', '1']], [['0'], ['1'], ['0', '2', '-1']], [['0'], ['0'], ['1']]],
    f0: ['0', '0', '1'], coeff_bound: { C: '2', rho: '1' } },
  cantor2: { name: 'cantor2', q: 2, m: 2,
    A: [[['1'], ['0', '1']], [['0'], ['1']]], f0: ['0', '1'], coeff_bound: { C: '1', rho: '1' } },
  thue_morse: { name: 'thue_morse', q: 2, m: 1, A: [[['1', '-1']]], f0: ['1'], coeff_bound: { C: '1', rho: '1' } },
  singular16: { name: 'singular16', q: 2, m: 1, A: [[['1', '-16']]], f0: ['1'] },
};

const $ = (id) => document.getElementById(id);
const out = $('out');

function show(f) {
  try {
    out.className = '';
    out.textContent = JSON.stringify(JSON.parse(f()), null, 2);
  } catch (e) {
    out.className = 'err';
    out.textContent = String(e);
  }
}

function load(name) {
  $('system').value = JSON.stringify(presets[name], null, 1);
}

await init();
load('cantor3');
out.textContent = 'ready';
$('preset').onchange = (e) => load(e.target.value);
$('solve').onclick = () => show(() => solve($('system').value, Number($('order').value)));
$('regular').onclick = () => show(() => regular($('system').value, $('alpha-reg').value));
$('lift').onclick = () => show(() =>
  lift($('system').value, $('alpha-lift').value, $('tau').value, Number($('degree').value), 64));
