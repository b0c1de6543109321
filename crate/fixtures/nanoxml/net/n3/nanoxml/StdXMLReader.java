package net.n3.nanoxml;

import java.io.IOException;
import java.io.PushbackReader;
import java.io.Reader;
import java.util.Stack;

public class StdXMLReader {

    private class StackedReader {
        PushbackReader pbReader;
        int lineReader;
        String systemId;
    }

    private Stack readers;
    private StackedReader currentReader;

    public StdXMLReader(Reader reader) {
        this.readers = new Stack();
        this.currentReader = new StackedReader();
    }

    public char read() throws IOException {
        int ch = this.currentReader.pbReader.read();
        while (ch == -1) {
            if (this.readers.empty()) {
                throw new IOException("Unexpected EOF");
            }
            this.currentReader.pbReader.close();
            this.currentReader = (StackedReader) this.readers.pop();
            ch = this.currentReader.pbReader.read();
        }
        return (char) ch;
    }

    public boolean atEOF() {
        return this.readers.empty();
    }
}
