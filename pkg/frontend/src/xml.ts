// Reader for the service's XML response bodies. The wire format is a strict
// subset (UTF-8, double-quoted attributes, character entities, no namespaces
// or CDATA), so a small tokenizer keeps parsing identical across browsers and
// test environments. Attribute order is preserved; indentation-only text is
// dropped.

export interface XmlNode {
  tag: string;
  attributes: Array<[string, string]>;
  children: XmlNode[];
  text: string | null;
}

const NAMED_ENTITIES: Record<string, string> = {
  amp: '&',
  lt: '<',
  gt: '>',
  quot: '"',
  apos: "'",
};

function decodeEntities(raw: string): string {
  return raw.replace(/&(#x?[0-9a-fA-F]+|[a-z]+);/g, (whole, body: string) => {
    if (body.startsWith('#x') || body.startsWith('#X')) {
      return String.fromCodePoint(parseInt(body.slice(2), 16));
    }
    if (body.startsWith('#')) {
      return String.fromCodePoint(parseInt(body.slice(1), 10));
    }
    const named = NAMED_ENTITIES[body];
    if (named === undefined) throw new Error(`unknown entity ${whole}`);
    return named;
  });
}

class Parser {
  private pos = 0;

  constructor(private readonly input: string) {}

  parse(): XmlNode {
    this.skipProlog();
    const root = this.parseElement();
    this.skipWhitespace();
    if (this.pos < this.input.length) throw new Error('trailing content after document root');
    return root;
  }

  private fail(reason: string): never {
    throw new Error(`bad XML at offset ${this.pos}: ${reason}`);
  }

  private skipWhitespace(): void {
    while (this.pos < this.input.length && /\s/.test(this.input[this.pos] as string)) this.pos++;
  }

  private skipProlog(): void {
    this.skipWhitespace();
    if (this.input.startsWith('<?xml', this.pos)) {
      const end = this.input.indexOf('?>', this.pos);
      if (end < 0) this.fail('unterminated declaration');
      this.pos = end + 2;
      this.skipWhitespace();
    }
  }

  private readName(): string {
    const match = /^[A-Za-z_][A-Za-z0-9._-]*/.exec(this.input.slice(this.pos));
    if (!match) this.fail('expected name');
    this.pos += match[0].length;
    return match[0];
  }

  private parseElement(): XmlNode {
    if (this.input[this.pos] !== '<') this.fail('expected element');
    this.pos++;
    const tag = this.readName();
    const attributes: Array<[string, string]> = [];

    for (;;) {
      this.skipWhitespace();
      const ch = this.input[this.pos];
      if (ch === '/') {
        if (this.input[this.pos + 1] !== '>') this.fail('malformed self-closing tag');
        this.pos += 2;
        return { tag, attributes, children: [], text: null };
      }
      if (ch === '>') {
        this.pos++;
        break;
      }
      const name = this.readName();
      if (this.input[this.pos] !== '=' || this.input[this.pos + 1] !== '"') {
        this.fail(`attribute ${name} needs a quoted value`);
      }
      this.pos += 2;
      const close = this.input.indexOf('"', this.pos);
      if (close < 0) this.fail('unterminated attribute value');
      attributes.push([name, decodeEntities(this.input.slice(this.pos, close))]);
      this.pos = close + 1;
    }

    const children: XmlNode[] = [];
    let text = '';
    for (;;) {
      if (this.pos >= this.input.length) this.fail(`unterminated <${tag}>`);
      if (this.input.startsWith('</', this.pos)) {
        this.pos += 2;
        const closing = this.readName();
        if (closing !== tag) this.fail(`mismatched </${closing}>, expected </${tag}>`);
        this.skipWhitespace();
        if (this.input[this.pos] !== '>') this.fail('malformed closing tag');
        this.pos++;
        break;
      }
      if (this.input[this.pos] === '<') {
        children.push(this.parseElement());
        continue;
      }
      const next = this.input.indexOf('<', this.pos);
      if (next < 0) this.fail(`unterminated <${tag}>`);
      text += decodeEntities(this.input.slice(this.pos, next));
      this.pos = next;
    }

    if (children.length > 0) return { tag, attributes, children, text: null };
    return { tag, attributes, children, text: text.trim() === '' ? null : text };
  }
}

export function parseXml(payload: string): XmlNode {
  return new Parser(payload).parse();
}

export function attribute(node: XmlNode, name: string): string | null {
  for (const [key, value] of node.attributes) {
    if (key === name) return value;
  }
  return null;
}
