/**
 * myarticles widget: fetches an author's Atom feed from the resolver and
 * renders a publication list into a mount element.
 *
 * Failures never propagate into the host page; every error path degrades to
 * a placeholder element inside the mount.
 */

export type WidgetFormat = "compact" | "list";

export interface WidgetConfig {
  authorUri: string;
  format: WidgetFormat;
  maxItems?: number;
  cssPrefix: string;
}

export interface FeedEntry {
  title: string;
  authors: string[];
  link: string | null;
  updated: string;
}

export interface FeedModel {
  title: string;
  entries: FeedEntry[];
}

export class FeedUnavailableError extends Error {
  constructor(readonly status: number, url: string) {
    super(`feed request failed with ${status} for ${url}`);
    this.name = "FeedUnavailableError";
  }
}

const DEFAULT_PREFIX = "myarticles";

export function configFromElement(element: Element): WidgetConfig | null {
  const authorUri = element.getAttribute("data-author-uri");
  if (!authorUri || !authorUri.includes("/a/")) {
    return null;
  }
  const rawFormat = element.getAttribute("data-format");
  const format: WidgetFormat = rawFormat === "compact" ? "compact" : "list";
  const rawMax = element.getAttribute("data-max-items");
  const parsedMax = rawMax === null ? NaN : Number.parseInt(rawMax, 10);
  return {
    authorUri: authorUri.replace(/\/+$/, ""),
    format,
    maxItems: Number.isInteger(parsedMax) && parsedMax >= 1 ? parsedMax : undefined,
    cssPrefix: element.getAttribute("data-css-prefix") || DEFAULT_PREFIX,
  };
}

function childElements(parent: Element, tag: string): Element[] {
  return Array.from(parent.children).filter(
    (child) => child.tagName.toLowerCase() === tag,
  );
}

function childText(parent: Element, tag: string): string {
  const child = childElements(parent, tag)[0];
  return child?.textContent ?? "";
}

function entryLink(entry: Element): string | null {
  const links = childElements(entry, "link");
  const alternate = links.find((l) => (l.getAttribute("rel") ?? "alternate") === "alternate");
  return (alternate ?? links[0])?.getAttribute("href") ?? null;
}

export function parseAtomFeed(xml: string): FeedModel {
  const doc = new DOMParser().parseFromString(xml, "application/xml");
  const root = doc.documentElement;
  if (!root || root.tagName.toLowerCase() !== "feed" || doc.getElementsByTagName("parsererror").length > 0) {
    throw new Error("response is not an Atom feed");
  }
  const entries = childElements(root, "entry").map((entry) => ({
    title: childText(entry, "title"),
    authors: childElements(entry, "author").map((a) => childText(a, "name")),
    link: entryLink(entry) ?? (childText(entry, "id") || null),
    updated: childText(entry, "updated"),
  }));
  return { title: childText(root, "title"), entries };
}

export async function fetchFeed(config: WidgetConfig): Promise<FeedModel> {
  const url = `${config.authorUri}.atom`;
  const response = await fetch(url, { headers: { Accept: "application/atom+xml" } });
  if (!response.ok) {
    throw new FeedUnavailableError(response.status, url);
  }
  const model = parseAtomFeed(await response.text());
  if (config.maxItems !== undefined) {
    model.entries = model.entries.slice(0, config.maxItems);
  }
  return model;
}

function clearAndAppend(mount: Element, node: Element): void {
  while (mount.firstChild) {
    mount.removeChild(mount.firstChild);
  }
  mount.appendChild(node);
}

export function renderPlaceholder(config: WidgetConfig, mount: Element, message: string): void {
  const doc = mount.ownerDocument;
  const box = doc.createElement("div");
  box.className = `${config.cssPrefix}-widget ${config.cssPrefix}-error`;
  box.textContent = message;
  clearAndAppend(mount, box);
}

export function renderWidget(model: FeedModel, config: WidgetConfig, mount: Element): void {
  const doc = mount.ownerDocument;
  const prefix = config.cssPrefix;
  const container = doc.createElement("div");
  container.className = `${prefix}-widget ${prefix}-${config.format}`;

  if (model.entries.length === 0) {
    const empty = doc.createElement("p");
    empty.className = `${prefix}-empty`;
    empty.textContent = "No articles found";
    container.appendChild(empty);
    clearAndAppend(mount, container);
    return;
  }

  const list = doc.createElement("ul");
  list.className = `${prefix}-items`;
  for (const entry of model.entries) {
    const item = doc.createElement("li");
    item.className = `${prefix}-item`;
    const title = doc.createElement("a");
    title.className = `${prefix}-title`;
    title.textContent = entry.title;
    if (entry.link) {
      title.setAttribute("href", entry.link);
    }
    item.appendChild(title);
    if (config.format === "list") {
      const authors = doc.createElement("span");
      authors.className = `${prefix}-authors`;
      authors.textContent = entry.authors.join(", ");
      item.appendChild(authors);
      const date = doc.createElement("span");
      date.className = `${prefix}-date`;
      date.textContent = entry.updated.slice(0, 10);
      item.appendChild(date);
    }
    list.appendChild(item);
  }
  container.appendChild(list);
  clearAndAppend(mount, container);
}

const inFlight = new WeakSet<Element>();

export async function mountWidget(element: Element | null): Promise<void> {
  if (element === null) {
    console.warn("myarticles: mount point does not exist; nothing to render");
    return;
  }
  if (inFlight.has(element)) {
    return;
  }
  const config = configFromElement(element);
  if (config === null) {
    console.warn("myarticles: mount element needs a data-author-uri under a /a/ path", element);
    return;
  }
  inFlight.add(element);
  try {
    renderWidget(await fetchFeed(config), config, element);
  } catch (error) {
    console.warn("myarticles: falling back to placeholder:", error);
    renderPlaceholder(config, element, "No articles found");
  } finally {
    inFlight.delete(element);
  }
}

export async function initAll(root: ParentNode = document): Promise<void> {
  const mounts = Array.from(root.querySelectorAll("[data-author-uri]"));
  await Promise.all(mounts.map((element) => mountWidget(element)));
}
